#include "aaphase/control.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace aa {
namespace {

// In-place solve of tridiag(1, 4, 1) x = d (the natural-spline system).
void solve_tridiag141(Eigen::VectorXd& d) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  std::vector<double> cp(static_cast<size_t>(n));
  cp[0] = 0.25;
  d[0] *= 0.25;
  for (int k = 1; k < n; ++k) {
    const double m = 4.0 - cp[static_cast<size_t>(k - 1)];
    cp[static_cast<size_t>(k)] = 1.0 / m;
    d[k] = (d[k] - d[k - 1]) / m;
  }
  for (int k = n - 2; k >= 0; --k) d[k] -= cp[static_cast<size_t>(k)] * d[k + 1];
}

}  // namespace

ControlSignal::ControlSignal(double duration, Eigen::Matrix2Xd samples)
    : duration_(duration), samples_(std::move(samples)) {
  if (!(duration > 0.0))
    throw std::invalid_argument("ControlSignal: duration must be > 0");
  n_ = static_cast<int>(samples_.cols()) - 1;
  if (n_ < 1)
    throw std::invalid_argument("ControlSignal: need at least 2 samples");
  h_ = duration_ / n_;
  build();
}

void ControlSignal::set_samples(const Eigen::Matrix2Xd& samples) {
  if (samples.cols() != samples_.cols())
    throw std::invalid_argument("ControlSignal: sample count mismatch");
  samples_ = samples;
  build();
}

void ControlSignal::build() {
  sigma_ = Eigen::Matrix2Xd::Zero(2, n_ + 1);
  const int ni = n_ - 1;  // interior knots
  if (ni <= 0) return;
  const double w = 6.0 / (h_ * h_);
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd rhs(ni);
    for (int k = 1; k < n_; ++k)
      rhs[k - 1] = w * (samples_(i, k + 1) - 2.0 * samples_(i, k) +
                        samples_(i, k - 1));
    solve_tridiag141(rhs);
    for (int k = 1; k < n_; ++k) sigma_(i, k) = rhs[k - 1];
  }
}

int ControlSignal::interval_of(double t, double* tau) const {
  const double tol = 1e-9 * std::max(1.0, duration_);
  if (t < -tol || t > duration_ + tol)
    throw std::invalid_argument("ControlSignal: time outside [0, duration]");
  int k = static_cast<int>(std::floor(t / h_));
  if (k < 0) k = 0;
  if (k > n_ - 1) k = n_ - 1;
  *tau = t - k * h_;
  return k;
}

Eigen::Vector2d ControlSignal::value(double t) const {
  double tau;
  const int k = interval_of(t, &tau);
  Eigen::Vector2d out;
  for (int i = 0; i < 2; ++i) {
    const double u0 = samples_(i, k), u1 = samples_(i, k + 1);
    const double s0 = sigma_(i, k), s1 = sigma_(i, k + 1);
    const double b = (u1 - u0) / h_ - h_ * (2.0 * s0 + s1) / 6.0;
    out[i] = u0 + tau * (b + tau * (0.5 * s0 + tau * (s1 - s0) / (6.0 * h_)));
  }
  return out;
}

Eigen::Vector2d ControlSignal::velocity(double t) const {
  double tau;
  const int k = interval_of(t, &tau);
  Eigen::Vector2d out;
  for (int i = 0; i < 2; ++i) {
    const double u0 = samples_(i, k), u1 = samples_(i, k + 1);
    const double s0 = sigma_(i, k), s1 = sigma_(i, k + 1);
    const double b = (u1 - u0) / h_ - h_ * (2.0 * s0 + s1) / 6.0;
    out[i] = b + tau * (s0 + tau * (s1 - s0) / (2.0 * h_));
  }
  return out;
}

Eigen::Vector2d ControlSignal::acceleration(double t) const {
  double tau;
  const int k = interval_of(t, &tau);
  Eigen::Vector2d out;
  for (int i = 0; i < 2; ++i) {
    const double s0 = sigma_(i, k), s1 = sigma_(i, k + 1);
    out[i] = s0 + (s1 - s0) * tau / h_;
  }
  return out;
}

double ControlSignal::smoothness_cost(const Eigen::Vector2d& nu) const {
  // On each interval du/dt = b + sigma0 tau + q tau^2 with
  // q = (sigma1 - sigma0)/(2h); integrate the square exactly.
  const double h = h_, h2 = h * h, h3 = h2 * h, h4 = h3 * h, h5 = h4 * h;
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n_; ++k) {
      const double u0 = samples_(i, k), u1 = samples_(i, k + 1);
      const double s0 = sigma_(i, k), s1 = sigma_(i, k + 1);
      const double b = (u1 - u0) / h - h * (2.0 * s0 + s1) / 6.0;
      const double q = (s1 - s0) / (2.0 * h);
      acc += b * b * h + b * s0 * h2 + (s0 * s0 + 2.0 * b * q) * h3 / 3.0 +
             s0 * q * h4 / 2.0 + q * q * h5 / 5.0;
    }
    total += 0.5 * nu[i] * acc;
  }
  return total;
}

Eigen::Matrix2Xd ControlSignal::smoothness_gradient(const Eigen::Vector2d& nu) const {
  const double h = h_, h2 = h * h, h3 = h2 * h, h4 = h3 * h, h5 = h4 * h;
  Eigen::Matrix2Xd gu = Eigen::Matrix2Xd::Zero(2, n_ + 1);
  Eigen::Matrix2Xd gs = Eigen::Matrix2Xd::Zero(2, n_ + 1);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < n_; ++k) {
      const double u0 = samples_(i, k), u1 = samples_(i, k + 1);
      const double s0 = sigma_(i, k), s1 = sigma_(i, k + 1);
      const double b = (u1 - u0) / h - h * (2.0 * s0 + s1) / 6.0;
      const double q = (s1 - s0) / (2.0 * h);
      const double dIdb = 2.0 * b * h + s0 * h2 + 2.0 * q * h3 / 3.0;
      const double dIds0 = b * h2 + 2.0 * s0 * h3 / 3.0 + q * h4 / 2.0;
      const double dIdq = 2.0 * b * h3 / 3.0 + s0 * h4 / 2.0 + 2.0 * q * h5 / 5.0;
      const double w = 0.5 * nu[i];
      gu(i, k) += w * dIdb * (-1.0 / h);
      gu(i, k + 1) += w * dIdb * (1.0 / h);
      gs(i, k) += w * (dIdb * (-h / 3.0) + dIds0 + dIdq * (-1.0 / (2.0 * h)));
      gs(i, k + 1) += w * (dIdb * (-h / 6.0) + dIdq * (1.0 / (2.0 * h)));
    }
  }
  // Push the curvature sensitivities back through sigma = T^-1 D u.
  const int ni = n_ - 1;
  if (ni > 0) {
    const double wd = 6.0 / (h * h);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd v(ni);
      for (int k = 1; k < n_; ++k) v[k - 1] = gs(i, k);
      solve_tridiag141(v);  // T is symmetric
      for (int j = 0; j <= n_; ++j) {
        double acc = 0.0;
        if (j - 1 >= 1 && j - 1 <= ni) acc += v[j - 2];
        if (j >= 1 && j <= ni) acc += -2.0 * v[j - 1];
        if (j + 1 >= 1 && j + 1 <= ni) acc += v[j];
        gu(i, j) += wd * acc;
      }
    }
  }
  return gu;
}

Eigen::Matrix2Xd ControlSignal::evaluation_adjoint(
    const std::vector<double>& times, const Eigen::Matrix2Xd& coef) const {
  if (static_cast<int>(times.size()) != coef.cols())
    throw std::invalid_argument("evaluation_adjoint: size mismatch");
  Eigen::Matrix2Xd gu = Eigen::Matrix2Xd::Zero(2, n_ + 1);
  Eigen::Matrix2Xd gs = Eigen::Matrix2Xd::Zero(2, n_ + 1);
  for (size_t m = 0; m < times.size(); ++m) {
    double tau;
    const int k = interval_of(times[m], &tau);
    const double a1 = 1.0 - tau / h_;
    const double a2 = tau / h_;
    const double w3 =
        tau * (-h_ / 3.0 + tau * (0.5 - tau / (6.0 * h_)));
    const double w4 = tau * (-h_ / 6.0 + tau * tau / (6.0 * h_));
    for (int i = 0; i < 2; ++i) {
      const double c = coef(i, static_cast<Eigen::Index>(m));
      gu(i, k) += c * a1;
      gu(i, k + 1) += c * a2;
      gs(i, k) += c * w3;
      gs(i, k + 1) += c * w4;
    }
  }
  const int ni = n_ - 1;
  if (ni > 0) {
    const double wd = 6.0 / (h_ * h_);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd v(ni);
      for (int k = 1; k < n_; ++k) v[k - 1] = gs(i, k);
      solve_tridiag141(v);
      for (int j = 0; j <= n_; ++j) {
        double acc = 0.0;
        if (j - 1 >= 1 && j - 1 <= ni) acc += v[j - 2];
        if (j >= 1 && j <= ni) acc += -2.0 * v[j - 1];
        if (j + 1 >= 1 && j + 1 <= ni) acc += v[j];
        gu(i, j) += wd * acc;
      }
    }
  }
  return gu;
}

Eigen::Matrix2Xd circle_loop_samples(const Eigen::Vector2d& center, double radius,
                                     const Eigen::Vector2d& start_dir, bool ccw,
                                     int n_intervals) {
  if (!(radius > 0.0))
    throw std::invalid_argument("circle_loop_samples: radius must be > 0");
  if (n_intervals < 2)
    throw std::invalid_argument("circle_loop_samples: need >= 2 intervals");
  const double nrm = start_dir.norm();
  if (!(nrm > 1e-12))
    throw std::invalid_argument("circle_loop_samples: start direction is zero");
  const Eigen::Vector2d s = start_dir / nrm;
  Eigen::Matrix2Xd out(2, n_intervals + 1);
  for (int k = 0; k < n_intervals; ++k) {
    const double a = (ccw ? 1.0 : -1.0) * 2.0 * M_PI * k / n_intervals;
    const double cs = std::cos(a), sn = std::sin(a);
    const Eigen::Vector2d dir(cs * s.x() - sn * s.y(), sn * s.x() + cs * s.y());
    out.col(k) = center + radius * dir;
  }
  out.col(n_intervals) = out.col(0);
  return out;
}

Eigen::Matrix2Xd ellipse_loop_samples(const Eigen::Vector2d& start,
                                      const Eigen::Vector2d& major_dir,
                                      double height, double width, bool ccw,
                                      int n_intervals) {
  if (height == 0.0)
    throw std::invalid_argument("ellipse_loop_samples: height must be nonzero");
  if (width < 0.0)
    throw std::invalid_argument("ellipse_loop_samples: width must be >= 0");
  if (n_intervals < 2)
    throw std::invalid_argument("ellipse_loop_samples: need >= 2 intervals");
  const double nrm = major_dir.norm();
  if (!(nrm > 1e-12))
    throw std::invalid_argument("ellipse_loop_samples: major direction is zero");
  const Eigen::Vector2d m = major_dir / nrm;
  const Eigen::Vector2d p(-m.y(), m.x());
  const double sgn = ccw ? 1.0 : -1.0;
  Eigen::Matrix2Xd out(2, n_intervals + 1);
  for (int k = 0; k < n_intervals; ++k) {
    const double a = 2.0 * M_PI * k / n_intervals;
    out.col(k) = start + 0.5 * height * (1.0 - std::cos(a)) * m +
                 sgn * width * std::sin(a) * p;
  }
  out.col(n_intervals) = out.col(0);
  return out;
}

}  // namespace aa
