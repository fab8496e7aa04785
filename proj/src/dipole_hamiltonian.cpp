#include "aaphase/dipole_hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "aaphase/angular.hpp"
#include "aaphase/errors.hpp"

namespace aa {
namespace {

struct Level {
  double j, m;
};

// Single-atom states spanned by the four pair channels.
constexpr Level kD{1.5, 1.5};
constexpr Level kP{0.5, 0.5};
constexpr Level kF52{2.5, 2.5};
constexpr Level kF32{2.5, 1.5};
constexpr Level kF12{2.5, 0.5};

struct Channel {
  Level a1, a2;
};

const std::array<Channel, 4> kChannels{{
    {kD, kD}, {kP, kF52}, {kP, kF32}, {kP, kF12}}};

// Pair matrix of d_qa (x) d_qb in the channel basis.
Eigen::Matrix4d pair_operator(int qa, int qb) {
  Eigen::Matrix4d T;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      const Channel& bra = kChannels[i];
      const Channel& ket = kChannels[k];
      T(i, k) = dipole_element(bra.a1.j, bra.a1.m, qa, ket.a1.j, ket.a1.m) *
                dipole_element(bra.a2.j, bra.a2.m, qb, ket.a2.j, ket.a2.m);
    }
  }
  return T;
}

}  // namespace

DipoleInteraction::DipoleInteraction(double c3, const Eigen::Vector2d& axis,
                                     double guard_radius)
    : c3_(c3), guard_(guard_radius) {
  const double n = axis.norm();
  if (!(n > 1e-12))
    throw std::invalid_argument("DipoleInteraction: quantization axis is zero");
  if (!(guard_radius > 0.0))
    throw std::invalid_argument("DipoleInteraction: guard radius must be > 0");
  axis_ = axis / n;
  perp_ = Eigen::Vector2d(axis_.y(), -axis_.x());

  // Angular weight of each (qa,qb) pair in the dipole-dipole operator,
  // split by its dependence on (s, c) = (sin theta, cos theta):
  //   (0,0)              : 1 - 3 c^2
  //   (1,-1), (-1,1)     : -(1 - 3/2 s^2)
  //   (1,1), (-1,-1)     : -3/2 s^2
  //   (1,0), (0,1)       : +3/sqrt(2) s c
  //   (-1,0), (0,-1)     : -3/sqrt(2) s c
  // Collecting per functional form and substituting s = x'/R, c = y'/R:
  //   H/C3 = R^-3 (B1 - B2)
  //        + R^-5 [ -3 y'^2 B1 + 3/2 x'^2 (B2 - B3) + 3/sqrt(2) x'y' B4 ].
  const Eigen::Matrix4d B1 = pair_operator(0, 0);
  const Eigen::Matrix4d B2 = pair_operator(1, -1) + pair_operator(-1, 1);
  const Eigen::Matrix4d B3 = pair_operator(1, 1) + pair_operator(-1, -1);
  const Eigen::Matrix4d B4 = pair_operator(1, 0) + pair_operator(0, 1) -
                             pair_operator(-1, 0) - pair_operator(0, -1);
  C_[0] = B1 - B2;                       // f = R^-3
  C_[1] = -3.0 * B1;                     // f = y'^2 R^-5
  C_[2] = 1.5 * (B2 - B3);               // f = x'^2 R^-5
  C_[3] = (3.0 / std::sqrt(2.0)) * B4;   // f = x'y' R^-5
}

GeometryEval DipoleInteraction::geometry(const Eigen::Vector2d& r1,
                                         const Eigen::Vector2d& r2,
                                         bool need_grad, bool need_hess) const {
  GeometryEval g;
  const Eigen::Vector2d rho = r2 - r1;
  g.R = rho.norm();
  if (g.R < guard_)
    throw GeometryError("atom separation below interaction guard radius",
                        std::nan(""));
  g.xp = rho.dot(perp_);
  g.yp = rho.dot(axis_);

  const double R2 = g.R * g.R;
  const double r3 = 1.0 / (R2 * g.R);
  const double r5 = r3 / R2;
  g.f = {r3, g.yp * g.yp * r5, g.xp * g.xp * r5, g.xp * g.yp * r5};
  if (!need_grad && !need_hess) return g;

  // Each term is f = P(u) R^n with u = (x', y') and P polynomial:
  //   grad f = R^n grad P + n R^(n-2) P u
  //   hess f = R^n hess P + n R^(n-2) (grad P u^T + u grad P^T + P I)
  //            + n(n-2) R^(n-4) P u u^T
  // evaluated in the axis frame, then rotated back to the lab frame.
  const Eigen::Vector2d u(g.xp, g.yp);
  const double r7 = r5 / R2;
  const double r9 = r7 / R2;
  const std::array<double, 4> P{1.0, g.yp * g.yp, g.xp * g.xp, g.xp * g.yp};
  const std::array<Eigen::Vector2d, 4> gradP{
      Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 2.0 * g.yp),
      Eigen::Vector2d(2.0 * g.xp, 0.0), Eigen::Vector2d(g.yp, g.xp)};
  const std::array<Eigen::Matrix2d, 4> hessP{
      Eigen::Matrix2d::Zero(),
      (Eigen::Matrix2d() << 0, 0, 0, 2).finished(),
      (Eigen::Matrix2d() << 2, 0, 0, 0).finished(),
      (Eigen::Matrix2d() << 0, 1, 1, 0).finished()};
  const std::array<double, 4> n_{-3.0, -5.0, -5.0, -5.0};
  const std::array<double, 4> Rn{r3, r5, r5, r5};
  const std::array<double, 4> Rn2{r5, r7, r7, r7};
  const std::array<double, 4> Rn4{r7, r9, r9, r9};

  Eigen::Matrix2d Q;  // columns: lab-frame images of the axis-frame basis
  Q.col(0) = perp_;
  Q.col(1) = axis_;

  g.have_grad = true;
  for (int t = 0; t < 4; ++t) {
    const Eigen::Vector2d gu = Rn[t] * gradP[t] + n_[t] * Rn2[t] * P[t] * u;
    g.grad[t] = Q * gu;
  }
  if (need_hess) {
    g.have_hess = true;
    for (int t = 0; t < 4; ++t) {
      Eigen::Matrix2d hu = Rn[t] * hessP[t];
      hu += n_[t] * Rn2[t] *
            (gradP[t] * u.transpose() + u * gradP[t].transpose() +
             P[t] * Eigen::Matrix2d::Identity());
      hu += n_[t] * (n_[t] - 2.0) * Rn4[t] * P[t] * (u * u.transpose());
      g.hess[t] = Q * hu * Q.transpose();
    }
  }
  return g;
}

Eigen::Matrix4d DipoleInteraction::hamiltonian(const GeometryEval& g) const {
  Eigen::Matrix4d H = g.f[0] * C_[0];
  for (int t = 1; t < 4; ++t) H += g.f[t] * C_[t];
  return c3_ * H;
}

Eigen::Matrix4d DipoleInteraction::hamiltonian(const Eigen::Vector2d& r1,
                                               const Eigen::Vector2d& r2) const {
  return hamiltonian(geometry(r1, r2));
}

Eigen::Matrix4d DipoleInteraction::rho_derivative(const GeometryEval& g,
                                                  const Eigen::Vector2d& dir) const {
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  for (int t = 0; t < 4; ++t) H += (g.grad[t].dot(dir)) * C_[t];
  return c3_ * H;
}

std::array<Eigen::Matrix4d, 2> DipoleInteraction::rho_gradient(
    const GeometryEval& g) const {
  std::array<Eigen::Matrix4d, 2> out{Eigen::Matrix4d::Zero(),
                                     Eigen::Matrix4d::Zero()};
  for (int t = 0; t < 4; ++t) {
    out[0] += g.grad[t].x() * C_[t];
    out[1] += g.grad[t].y() * C_[t];
  }
  out[0] *= c3_;
  out[1] *= c3_;
  return out;
}

std::array<double, 4> DipoleInteraction::state_weights(
    const Eigen::Vector4d& re, const Eigen::Vector4d& im) const {
  std::array<double, 4> w;
  for (int t = 0; t < 4; ++t)
    w[t] = re.dot(C_[t] * re) + im.dot(C_[t] * im);
  return w;
}

std::array<double, 4> DipoleInteraction::cross_weights(
    const Eigen::Vector4d& phi_re, const Eigen::Vector4d& phi_im,
    const Eigen::Vector4d& psi_re, const Eigen::Vector4d& psi_im) const {
  std::array<double, 4> z;
  for (int t = 0; t < 4; ++t)
    z[t] = 2.0 * (phi_re.dot(C_[t] * psi_re) + phi_im.dot(C_[t] * psi_im));
  return z;
}

double DipoleInteraction::energy(const GeometryEval& g,
                                 const std::array<double, 4>& w) const {
  double e = 0.0;
  for (int t = 0; t < 4; ++t) e += w[t] * g.f[t];
  return c3_ * e;
}

Eigen::Vector2d DipoleInteraction::energy_grad_rho(
    const GeometryEval& g, const std::array<double, 4>& w) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int t = 0; t < 4; ++t) v += w[t] * g.grad[t];
  return c3_ * v;
}

Eigen::Matrix2d DipoleInteraction::energy_hess_rho(
    const GeometryEval& g, const std::array<double, 4>& w) const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (int t = 0; t < 4; ++t) m += w[t] * g.hess[t];
  return c3_ * m;
}

const std::array<std::string, 4>& DipoleInteraction::channel_names() {
  static const std::array<std::string, 4> names{"dd", "pf1", "pf2", "pf3"};
  return names;
}

}  // namespace aa
