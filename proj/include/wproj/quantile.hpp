#pragma once

#include <vector>

#include "wproj/measures.hpp"

namespace wproj {

/// Generalized inverse CDF of a 1-D probability measure on [0, 1].
///
/// Step mode: values[k] holds on [t_k, t_{k+1}) (one value per segment), the
/// quantile of a discrete measure. Linear mode: values[k] = Q(t_k) with linear
/// interpolation (one value per breakpoint), the quantile of a measure with a
/// piecewise-constant density. A repeated breakpoint in linear mode encodes a
/// jump of Q, i.e. a gap in the support.
class QuantileFn {
 public:
  enum class Mode { Step, Linear };

  static QuantileFn step(std::vector<double> breakpoints, std::vector<double> values);
  static QuantileFn linear(std::vector<double> breakpoints, std::vector<double> values);
  static QuantileFn of(const DiscreteMeasure& m);
  /// Uniform distribution on [a, b].
  static QuantileFn uniform(double a, double b);

  Mode mode() const noexcept { return mode_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Q(t); right-continuous in step mode.
  double operator()(double t) const;
  /// Values at the two ends of the open segment (a, b), which must not
  /// contain a breakpoint.
  std::pair<double, double> on_segment(double a, double b) const;
  /// Integral of Q over [a, b].
  double integral(double a, double b) const;
  double mean() const { return integral(0.0, 1.0); }
  /// n * integral of Q over [i/n, (i+1)/n] for i = 0..n-1.
  std::vector<double> cell_averages(std::size_t n) const;
  /// Smallest slope over the linear pieces (linear mode only).
  double min_slope() const;
  /// F(x) = |{t : Q(t) <= x}| for linear mode with positive slopes.
  double cdf(double x) const;
  QuantileFn shifted(double h) const;

 private:
  QuantileFn(Mode mode, std::vector<double> t, std::vector<double> v)
      : mode_(mode), breakpoints_(std::move(t)), values_(std::move(v)) {}
  std::size_t segment_of(double t) const;

  Mode mode_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Integral of |Q1 - Q2|^p over [0, 1], exact segment by segment.
double quantile_distance_pow(const QuantileFn& a, const QuantileFn& b, double p);

/// Integral over [0, L] of |v0 + (v1 - v0) u / L|^p du.
double integrate_abs_linear_pow(double v0, double v1, double length, double p);

}  // namespace wproj
