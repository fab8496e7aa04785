#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

// Resonant dipole-dipole coupling between two atoms confined to a plane that
// contains the quantization axis.  The internal pair basis spans the four
// channels
//     0: |dd>    both atoms in  (j=3/2, m=3/2)
//     1: |pf1>   atom 1 -> (1/2,1/2),  atom 2 -> (5/2,5/2)
//     2: |pf2>   atom 1 -> (1/2,1/2),  atom 2 -> (5/2,3/2)
//     3: |pf3>   atom 1 -> (1/2,1/2),  atom 2 -> (5/2,1/2)
// and the interaction is  H(rho) = C3/R^3 * M(theta)  with rho = r2 - r1,
// R = |rho| and theta the angle between rho and the quantization axis.
//
// Internally H is decomposed into four geometry terms with constant channel
// matrices C_t,
//     H = C3 * sum_t f_t(rho) C_t,
//     f = { R^-3,  y'^2 R^-5,  x'^2 R^-5,  x' y' R^-5 },
// where (x', y') are the components of rho transverse/parallel to the axis.
// This form gives cheap exact gradients and Hessians in rho, and lets all
// state-dependent quantities be assembled from the four quadratic forms
// w_t = <psi| C_t |psi> without materializing matrices in inner loops.

namespace aa {

struct GeometryEval {
  double R = 0.0;                         // |r2 - r1|  (um)
  double xp = 0.0, yp = 0.0;              // rho in the axis frame (um)
  std::array<double, 4> f{};              // term scalars
  std::array<Eigen::Vector2d, 4> grad{};  // d f_t / d rho        (lab frame)
  std::array<Eigen::Matrix2d, 4> hess{};  // d^2 f_t / d rho^2    (lab frame)
  bool have_grad = false;
  bool have_hess = false;
};

class DipoleInteraction {
 public:
  // c3 in rad/us um^3; axis need not be normalized but must be nonzero.
  // guard_radius (um): below this separation the point-dipole model is not
  // trusted and geometry evaluation throws GeometryError.
  DipoleInteraction(double c3, const Eigen::Vector2d& axis, double guard_radius);

  double c3() const { return c3_; }
  double guard_radius() const { return guard_; }
  const Eigen::Vector2d& axis() const { return axis_; }

  GeometryEval geometry(const Eigen::Vector2d& r1, const Eigen::Vector2d& r2,
                        bool need_grad = false, bool need_hess = false) const;

  // Channel-basis matrices.
  Eigen::Matrix4d hamiltonian(const GeometryEval& g) const;
  Eigen::Matrix4d hamiltonian(const Eigen::Vector2d& r1,
                              const Eigen::Vector2d& r2) const;
  // dH/drho contracted with a fixed direction in rho-space.
  Eigen::Matrix4d rho_derivative(const GeometryEval& g,
                                 const Eigen::Vector2d& dir) const;
  // Both components of dH/drho.
  std::array<Eigen::Matrix4d, 2> rho_gradient(const GeometryEval& g) const;

  // Quadratic-form weights.  state_weights gives w_t = <psi|C_t|psi> for
  // psi = re + i*im; cross_weights gives z_t = 2 Re(phi^dag C_t psi).
  std::array<double, 4> state_weights(const Eigen::Vector4d& re,
                                      const Eigen::Vector4d& im) const;
  std::array<double, 4> cross_weights(const Eigen::Vector4d& phi_re,
                                      const Eigen::Vector4d& phi_im,
                                      const Eigen::Vector4d& psi_re,
                                      const Eigen::Vector4d& psi_im) const;

  // Scalar reductions for a fixed weight vector:
  //   energy        = <H>           = C3 sum_t w_t f_t
  //   energy_grad   = d<H>/drho     = C3 sum_t w_t grad f_t
  //   energy_hess   = d2<H>/drho2   = C3 sum_t w_t hess f_t
  double energy(const GeometryEval& g, const std::array<double, 4>& w) const;
  Eigen::Vector2d energy_grad_rho(const GeometryEval& g,
                                  const std::array<double, 4>& w) const;
  Eigen::Matrix2d energy_hess_rho(const GeometryEval& g,
                                  const std::array<double, 4>& w) const;

  const std::array<Eigen::Matrix4d, 4>& term_matrices() const { return C_; }

  static const std::array<std::string, 4>& channel_names();

 private:
  double c3_;
  Eigen::Vector2d axis_;   // normalized
  Eigen::Vector2d perp_;   // (axis_y, -axis_x)
  double guard_;
  std::array<Eigen::Matrix4d, 4> C_;
};

}  // namespace aa
