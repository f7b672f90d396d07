#include "wproj/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wproj/error.hpp"

namespace wproj {

namespace {

// Linear quantiles may repeat a breakpoint to encode a jump.
void check_breakpoints(const std::vector<double>& t, bool allow_repeats) {
  if (t.size() < 2 || t.front() != 0.0 || t.back() != 1.0) {
    throw Error(ErrorCode::InvalidSpec, "quantile breakpoints must run from 0 to 1");
  }
  for (std::size_t k = 1; k < t.size(); ++k) {
    const bool ok = allow_repeats ? t[k] >= t[k - 1] : t[k] > t[k - 1];
    if (!ok) throw Error(ErrorCode::InvalidSpec, "quantile breakpoints must increase");
  }
}

void check_monotone(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] < v[k - 1]) throw Error(ErrorCode::InvalidSpec, "quantile values must be nondecreasing");
  }
}

// (b^{p+1} - a^{p+1}) / ((p+1)(b-a)) for 0 <= a, b, stable as b -> a.
double divided_power(double a, double b, double p) {
  const double m = 0.5 * (a + b);
  const double d = b - a;
  if (m == 0.0) return 0.0;
  if (std::abs(d) < 1e-4 * m) {
    return std::pow(m, p) * (1.0 + p * (p - 1.0) / 24.0 * (d / m) * (d / m));
  }
  return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * d);
}

}  // namespace

double integrate_abs_linear_pow(double v0, double v1, double length, double p) {
  if (length <= 0.0) return 0.0;
  const double a = std::abs(v0);
  const double b = std::abs(v1);
  if ((v0 >= 0.0 && v1 >= 0.0) || (v0 <= 0.0 && v1 <= 0.0)) return length * divided_power(a, b, p);
  // Sign change inside the segment.
  return length * (std::pow(a, p + 1.0) + std::pow(b, p + 1.0)) / ((p + 1.0) * (a + b));
}

QuantileFn QuantileFn::step(std::vector<double> breakpoints, std::vector<double> values) {
  check_breakpoints(breakpoints, false);
  if (values.size() + 1 != breakpoints.size()) throw Error(ErrorCode::InvalidSpec, "step quantile needs m values");
  check_monotone(values);
  return QuantileFn(Mode::Step, std::move(breakpoints), std::move(values));
}

QuantileFn QuantileFn::linear(std::vector<double> breakpoints, std::vector<double> values) {
  check_breakpoints(breakpoints, true);
  if (values.size() != breakpoints.size()) throw Error(ErrorCode::InvalidSpec, "linear quantile needs m+1 values");
  check_monotone(values);
  return QuantileFn(Mode::Linear, std::move(breakpoints), std::move(values));
}

QuantileFn QuantileFn::of(const DiscreteMeasure& m) {
  if (m.dim() != 1) throw Error(ErrorCode::DimMismatch, "quantile functions need a 1-D measure");
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m.point(a)[0] < m.point(b)[0]; });
  std::vector<double> t{0.0};
  std::vector<double> v;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double x = m.point(order[k])[0];
    cumulative += m.weight(order[k]);
    if (!v.empty() && v.back() == x) {
      t.back() = cumulative;
    } else {
      v.push_back(x);
      t.push_back(cumulative);
    }
  }
  t.back() = 1.0;
  // Guard against breakpoints collapsing through rounding.
  for (std::size_t k = t.size() - 1; k-- > 1;) {
    if (!(t[k] < t[k + 1])) t[k] = std::nextafter(t[k + 1], 0.0);
  }
  return step(std::move(t), std::move(v));
}

QuantileFn QuantileFn::uniform(double a, double b) {
  if (!(b > a)) throw Error(ErrorCode::InvalidSpec, "uniform needs a < b");
  return linear({0.0, 1.0}, {a, b});
}

std::size_t QuantileFn::segment_of(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breakpoints_.begin()) - 1));
  return std::min(k, breakpoints_.size() - 2);
}

double QuantileFn::operator()(double t) const {
  const std::size_t k = segment_of(t);
  if (mode_ == Mode::Step) return values_[k];
  const double t0 = breakpoints_[k];
  const double t1 = breakpoints_[k + 1];
  if (!(t1 > t0)) return values_[k + 1];
  const double u = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
  return values_[k] + u * (values_[k + 1] - values_[k]);
}

std::pair<double, double> QuantileFn::on_segment(double a, double b) const {
  const std::size_t k = segment_of(0.5 * (a + b));
  if (mode_ == Mode::Step) return {values_[k], values_[k]};
  const double t0 = breakpoints_[k];
  const double t1 = breakpoints_[k + 1];
  const double slope = (values_[k + 1] - values_[k]) / (t1 - t0);
  return {values_[k] + slope * (a - t0), values_[k] + slope * (b - t0)};
}

double QuantileFn::integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  std::size_t k = segment_of(a);
  double lo = a;
  while (lo < b && k + 1 < breakpoints_.size()) {
    const double hi = std::min(b, breakpoints_[k + 1]);
    if (hi > lo) {
      const auto [v0, v1] = on_segment(lo, hi);
      total += 0.5 * (v0 + v1) * (hi - lo);
    }
    lo = hi;
    ++k;
  }
  return total;
}

std::vector<double> QuantileFn::cell_averages(std::size_t n) const {
  std::vector<double> avg(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / dn;
    const double hi = i + 1 == n ? 1.0 : static_cast<double>(i + 1) / dn;
    avg[i] = integral(lo, hi) * dn;
  }
  return avg;
}

double QuantileFn::min_slope() const {
  if (mode_ != Mode::Linear) throw Error(ErrorCode::InvalidSpec, "slope is defined for linear quantiles only");
  double best = INFINITY;
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    const double dt = breakpoints_[k + 1] - breakpoints_[k];
    if (dt > 0.0) best = std::min(best, (values_[k + 1] - values_[k]) / dt);
  }
  return best;
}

double QuantileFn::cdf(double x) const {
  if (mode_ != Mode::Linear) throw Error(ErrorCode::InvalidSpec, "cdf is implemented for linear quantiles only");
  if (x <= values_.front()) return 0.0;
  if (x >= values_.back()) return 1.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  const auto k = static_cast<std::size_t>(it - values_.begin()) - 1;
  const double dv = values_[k + 1] - values_[k];
  if (dv <= 0.0) return breakpoints_[k + 1];
  return breakpoints_[k] + (x - values_[k]) / dv * (breakpoints_[k + 1] - breakpoints_[k]);
}

QuantileFn QuantileFn::shifted(double h) const {
  auto v = values_;
  for (double& x : v) x += h;
  return QuantileFn(mode_, breakpoints_, std::move(v));
}

double quantile_distance_pow(const QuantileFn& a, const QuantileFn& b, double p) {
  std::vector<double> t;
  t.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(), b.breakpoints().end(),
             std::back_inserter(t));
  t.erase(std::unique(t.begin(), t.end()), t.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const auto [a0, a1] = a.on_segment(t[k], t[k + 1]);
    const auto [b0, b1] = b.on_segment(t[k], t[k + 1]);
    total += integrate_abs_linear_pow(a0 - b0, a1 - b1, t[k + 1] - t[k], p);
  }
  return total;
}

}  // namespace wproj
