#pragma once

#include <Eigen/Dense>
#include <vector>

// Gaussian optical tweezers acting on the atoms' center-of-mass motion.
// A trap of depth D (rad/us) and waist sigma (um) centered at c contributes
//     U(r) = -D exp(-|r - c|^2 / sigma^2),
// attractive, with curvature 2 D / sigma^2 at the bottom.  One trap in a set
// may be "mobile": its center follows the control signal u(t).

namespace aa {

struct TweezerField {
  double depth = 0.0;          // rad/us, positive for an attractive well
  double sigma = 1.0;          // um
  Eigen::Vector2d center{0.0, 0.0};  // um (ignored while mobile)
  bool mobile = false;

  double potential(const Eigen::Vector2d& r, const Eigen::Vector2d& c) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& r, const Eigen::Vector2d& c) const;
  Eigen::Matrix2d hessian(const Eigen::Vector2d& r, const Eigen::Vector2d& c) const;
};

class FieldSet {
 public:
  FieldSet() = default;
  explicit FieldSet(std::vector<TweezerField> fields);

  const std::vector<TweezerField>& fields() const { return fields_; }
  bool has_mobile() const { return mobile_ >= 0; }
  const TweezerField& mobile() const;

  // Total optical potential / gradient / Hessian at r with the mobile trap
  // centered at u (u is unused when the set holds no mobile trap).
  double potential(const Eigen::Vector2d& r, const Eigen::Vector2d& u) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& r, const Eigen::Vector2d& u) const;
  Eigen::Matrix2d hessian(const Eigen::Vector2d& r, const Eigen::Vector2d& u) const;

  // Mixed second derivative d^2 U_mobile / dr du at r; because the mobile
  // potential depends only on r - u this equals minus its r-Hessian.
  Eigen::Matrix2d mixed_hessian(const Eigen::Vector2d& r,
                                const Eigen::Vector2d& u) const;

 private:
  std::vector<TweezerField> fields_;
  int mobile_ = -1;
};

}  // namespace aa
