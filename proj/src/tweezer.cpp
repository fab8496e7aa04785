#include "aaphase/tweezer.hpp"

#include <cmath>
#include <stdexcept>

namespace aa {

double TweezerField::potential(const Eigen::Vector2d& r,
                               const Eigen::Vector2d& c) const {
  const Eigen::Vector2d d = r - c;
  return -depth * std::exp(-d.squaredNorm() / (sigma * sigma));
}

Eigen::Vector2d TweezerField::gradient(const Eigen::Vector2d& r,
                                       const Eigen::Vector2d& c) const {
  const Eigen::Vector2d d = r - c;
  const double s2 = sigma * sigma;
  return (2.0 * depth / s2) * std::exp(-d.squaredNorm() / s2) * d;
}

Eigen::Matrix2d TweezerField::hessian(const Eigen::Vector2d& r,
                                      const Eigen::Vector2d& c) const {
  const Eigen::Vector2d d = r - c;
  const double s2 = sigma * sigma;
  const double e = std::exp(-d.squaredNorm() / s2);
  return (2.0 * depth / s2) * e *
         (Eigen::Matrix2d::Identity() - (2.0 / s2) * d * d.transpose());
}

FieldSet::FieldSet(std::vector<TweezerField> fields)
    : fields_(std::move(fields)) {
  for (size_t i = 0; i < fields_.size(); ++i) {
    if (!(fields_[i].sigma > 0.0))
      throw std::invalid_argument("FieldSet: trap waist must be > 0");
    if (fields_[i].mobile) {
      if (mobile_ >= 0)
        throw std::invalid_argument("FieldSet: more than one mobile trap");
      mobile_ = static_cast<int>(i);
    }
  }
}

const TweezerField& FieldSet::mobile() const {
  if (mobile_ < 0) throw std::logic_error("FieldSet: no mobile trap");
  return fields_[static_cast<size_t>(mobile_)];
}

double FieldSet::potential(const Eigen::Vector2d& r,
                           const Eigen::Vector2d& u) const {
  double v = 0.0;
  for (const auto& f : fields_) v += f.potential(r, f.mobile ? u : f.center);
  return v;
}

Eigen::Vector2d FieldSet::gradient(const Eigen::Vector2d& r,
                                   const Eigen::Vector2d& u) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (const auto& f : fields_) v += f.gradient(r, f.mobile ? u : f.center);
  return v;
}

Eigen::Matrix2d FieldSet::hessian(const Eigen::Vector2d& r,
                                  const Eigen::Vector2d& u) const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (const auto& f : fields_) m += f.hessian(r, f.mobile ? u : f.center);
  return m;
}

Eigen::Matrix2d FieldSet::mixed_hessian(const Eigen::Vector2d& r,
                                        const Eigen::Vector2d& u) const {
  if (mobile_ < 0) return Eigen::Matrix2d::Zero();
  return -fields_[static_cast<size_t>(mobile_)].hessian(r, u);
}

}  // namespace aa
