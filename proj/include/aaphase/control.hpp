#pragma once

#include <Eigen/Dense>

// Tweezer-center control signal u(t) on a uniform time grid, interpolated by
// a natural cubic spline (second derivatives vanish at both ends).  The
// sample matrix is the optimizer's decision variable; everything else --
// values, derivatives, the smoothness cost and its exact gradient, and the
// adjoint of pointwise evaluation -- is derived from it consistently.

namespace aa {

class ControlSignal {
 public:
  // samples: 2 x (N+1) knot values over [0, duration], N >= 1 intervals.
  ControlSignal(double duration, Eigen::Matrix2Xd samples);

  double duration() const { return duration_; }
  int intervals() const { return n_; }
  double knot_spacing() const { return h_; }
  const Eigen::Matrix2Xd& samples() const { return samples_; }
  const Eigen::Matrix2Xd& knot_curvatures() const { return sigma_; }

  Eigen::Vector2d value(double t) const;
  Eigen::Vector2d velocity(double t) const;
  Eigen::Vector2d acceleration(double t) const;

  // K = 1/2 * sum_i nu_i * integral of du_i/dt^2, evaluated exactly from the
  // piecewise-cubic form, and its exact gradient w.r.t. the samples.
  double smoothness_cost(const Eigen::Vector2d& nu) const;
  Eigen::Matrix2Xd smoothness_gradient(const Eigen::Vector2d& nu) const;

  // Adjoint of evaluation: for L = sum_m coef_m . u(t_m), returns dL/dsamples
  // (2 x (N+1)).  Accounts for the dependence of the spline curvatures on the
  // samples via the transposed tridiagonal solve.
  Eigen::Matrix2Xd evaluation_adjoint(const std::vector<double>& times,
                                      const Eigen::Matrix2Xd& coef) const;

  // Replace the samples (same shape), rebuilding the spline.
  void set_samples(const Eigen::Matrix2Xd& samples);

 private:
  void build();
  int interval_of(double t, double* tau) const;

  double duration_;
  int n_;
  double h_;
  Eigen::Matrix2Xd samples_;  // 2 x (N+1)
  Eigen::Matrix2Xd sigma_;    // 2 x (N+1), second derivatives at knots
};

// Closed-loop sample builders (first and last samples coincide exactly).
//
// One full revolution of radius r about `center`, starting at
// center + r * start_dir; counterclockwise when ccw is true.
Eigen::Matrix2Xd circle_loop_samples(const Eigen::Vector2d& center, double radius,
                                     const Eigen::Vector2d& start_dir, bool ccw,
                                     int n_intervals);

// Thin closed loop leaving `start` along major_dir: reaches start +
// height * major_dir at the far end, with transverse half-width `width`.
// A negative height runs the excursion the opposite way along major_dir.
Eigen::Matrix2Xd ellipse_loop_samples(const Eigen::Vector2d& start,
                                      const Eigen::Vector2d& major_dir,
                                      double height, double width, bool ccw,
                                      int n_intervals);

}  // namespace aa
