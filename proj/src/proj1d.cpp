#include "wproj/proj1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wproj/error.hpp"

namespace wproj {

void ProjectionSpec1D::validate() const {
  if (!(p.p > 1.0)) throw Error(ErrorCode::InvalidSpec, "projection needs p > 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "projection needs n >= 2 samples");
  if (!(grid_spacing >= 0.0)) throw Error(ErrorCode::InvalidSpec, "grid spacing must be >= 0");
}

namespace {

// Derivative of v -> sum |v - z_l|^p / p over z[first, last).
double pool_slope(std::span<const double> z, double v, double p) {
  double g = 0.0;
  for (double zl : z) {
    const double r = v - zl;
    g += std::copysign(std::pow(std::abs(r), p - 1.0), r);
  }
  return g;
}

double pool_curvature(std::span<const double> z, double v, double p) {
  double h = 0.0;
  for (double zl : z) h += std::pow(std::abs(v - zl), p - 2.0);
  return (p - 1.0) * h;
}

// Minimizer of sum |v - z_l|^p on the pool, known to lie in [lo, hi].
// Newton steps, falling back to bisection whenever a step leaves the bracket.
double pool_value(std::span<const double> z, double p, double lo, double hi, double start) {
  double v = std::clamp(start, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = pool_slope(z, v, p);
    if (g == 0.0) return v;
    if (g > 0.0) hi = v; else lo = v;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(v))) break;
    const double h = pool_curvature(z, v, p);
    double next = std::isfinite(h) && h > 0.0 ? v - g / h : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - v) <= 1e-15 * std::max(1.0, std::abs(v))) return next;
    v = next;
  }
  return 0.5 * (lo + hi);
}

struct Pool {
  std::size_t start;
  std::size_t size;
  double sum;    // of targets, used at p = 2
  double value;
};

}  // namespace

ConstrainedFit project_samples(std::span<const double> q, double p, double lambda) {
  const std::size_t n = q.size();
  if (n == 0) throw Error(ErrorCode::EmptySupport, "no samples to project");
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidSpec, "projection needs p > 1");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  const double step = 1.0 / (lambda * static_cast<double>(n));
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = q[i] - static_cast<double>(i) * step;

  const bool quadratic = p == 2.0;
  std::vector<Pool> pools;
  pools.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Pool cur{i, 1, z[i], z[i]};
    while (!pools.empty() && pools.back().value >= cur.value) {
      const Pool prev = pools.back();
      pools.pop_back();
      Pool merged{prev.start, prev.size + cur.size, prev.sum + cur.sum, 0.0};
      if (quadratic) {
        merged.value = merged.sum / static_cast<double>(merged.size);
      } else if (prev.value == cur.value) {
        merged.value = cur.value;
      } else {
        const double guess = merged.sum / static_cast<double>(merged.size);
        merged.value = pool_value(std::span<const double>(z).subspan(merged.start, merged.size), p, cur.value,
                                  prev.value, guess);
      }
      cur = merged;
    }
    pools.push_back(cur);
  }

  ConstrainedFit fit;
  fit.x.resize(n);
  fit.pool_starts.reserve(pools.size());
  for (const Pool& pool : pools) {
    fit.pool_starts.push_back(pool.start);
    for (std::size_t i = pool.start; i < pool.start + pool.size; ++i) {
      fit.x[i] = pool.value + static_cast<double>(i) * step;
    }
  }
  return fit;
}

namespace {

// Minimizer of sum |v - z_l|^p: plain bisection on the sign of the derivative
// over [min z, max z], run until the bracket stops shrinking.
double bisect_block(std::span<const double> z, double p) {
  double lo = *std::min_element(z.begin(), z.end());
  double hi = *std::max_element(z.begin(), z.end());
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) return mid;
    double g = 0.0;
    for (double zl : z) {
      const double r = mid - zl;
      g += r > 0.0 ? std::pow(r, p - 1.0) : -std::pow(-r, p - 1.0);
    }
    if (g > 0.0) hi = mid; else lo = mid;
  }
}

}  // namespace

std::vector<double> brute_force_projection_oracle(std::span<const double> q, double p, double lambda) {
  const std::size_t n = q.size();
  if (n > 25) throw Error(ErrorCode::SizeLimit, "oracle accepts at most 25 samples, got " + std::to_string(n));
  if (n == 0) return {};
  const double step = 1.0 / (lambda * static_cast<double>(n));
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = q[i] - static_cast<double>(i) * step;
  std::vector<double> m(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      m[j * n + k] = bisect_block(std::span<const double>(z).subspan(j, k - j + 1), p);
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -INFINITY;
    for (std::size_t j = 0; j <= i; ++j) {
      double inner = INFINITY;
      for (std::size_t k = i; k < n; ++k) inner = std::min(inner, m[j * n + k]);
      best = std::max(best, inner);
    }
    x[i] = best + static_cast<double>(i) * step;
  }
  return x;
}

QuantileFn quantile_through(std::span<const double> x, double lambda) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::EmptySupport, "no samples");
  const double dn = static_cast<double>(n);
  const double half = 0.5 / (lambda * dn);
  std::vector<double> t;
  std::vector<double> v;
  t.reserve(2 * n + 1);
  v.reserve(2 * n + 1);
  t.push_back(0.0);
  v.push_back(x.front() - half);
  for (std::size_t i = 0; i < n; ++i) {
    const double edge = i + 1 == n ? 1.0 : static_cast<double>(i + 1) / dn;
    const double right = x[i] + half;
    t.push_back(edge);
    v.push_back(right);
    // Rounding can leave the next left end a few ulps below; merge those.
    if (i + 1 < n && x[i + 1] - half > right) {
      t.push_back(edge);
      v.push_back(x[i + 1] - half);
    }
  }
  return QuantileFn::linear(std::move(t), std::move(v));
}

QuantileFn project_quantile(const QuantileFn& q, const ProjectionSpec1D& spec) {
  spec.validate();
  const auto averages = q.cell_averages(spec.n);
  const auto fit = project_samples(averages, spec.p.p, spec.lambda);
  return quantile_through(fit.x, spec.lambda);
}

QuantileFn project_quantile_of(const DiscreteMeasure& mu, const ProjectionSpec1D& spec) {
  return project_quantile(QuantileFn::of(mu), spec);
}

GridMeasure grid_from_quantile(const QuantileFn& q, double lambda, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidSpec, "grid spacing must be positive");
  const double lo = q.values().front();
  const double hi = q.values().back();
  const auto first = static_cast<long long>(std::floor(lo / spacing + 1e-9));
  auto last = static_cast<long long>(std::ceil(hi / spacing - 1e-9));
  if (last <= first) last = first + 1;
  const auto cells = static_cast<std::size_t>(last - first);
  std::vector<double> mass(cells);
  double below = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double right = static_cast<double>(first + static_cast<long long>(k) + 1) * spacing;
    const double above = k + 1 == cells ? 1.0 : q.cdf(right);
    mass[k] = std::max(0.0, above - below);
    below = above;
  }
  GridSpec grid{{static_cast<double>(first) * spacing}, {spacing}, {cells}};
  return GridMeasure::create(std::move(grid), std::move(mass), lambda, true);
}

GridMeasure project_measure_1d(const DiscreteMeasure& mu, const ProjectionSpec1D& spec) {
  if (mu.dim() != 1) throw Error(ErrorCode::DimMismatch, "project_measure_1d needs a 1-D measure");
  const auto projected = project_quantile_of(mu, spec);
  const double h = spec.grid_spacing > 0.0 ? spec.grid_spacing : 1.0 / (spec.lambda * static_cast<double>(spec.n));
  return grid_from_quantile(projected, spec.lambda, h);
}

}  // namespace wproj
