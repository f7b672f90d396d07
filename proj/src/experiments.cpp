#include "wproj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wproj/ball_geometry.hpp"
#include "wproj/discretize.hpp"
#include "wproj/error.hpp"
#include "wproj/kernels.hpp"
#include "wproj/projnd.hpp"

namespace wproj {

CounterexampleInstance build_counterexample(int d) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "the construction needs d >= 2, got " + std::to_string(d));
  const double R = rad_ball(d, 0.5);
  Point origin(static_cast<std::size_t>(d), 0.0);
  Point far = origin;
  far[0] = 2.0 * R;
  auto mu = DiscreteMeasure::create({origin, far}, {0.5, 0.5});
  auto nu = DiscreteMeasure::dirac(origin);
  auto rho = project_atoms_analytic(mu, 1.0);
  auto sigma = project_atoms_analytic(nu, 1.0);
  return {d, R, std::move(mu), std::move(nu), std::move(rho), std::move(sigma), EBand{}};
}

double wp_mu_nu_exact(const CounterexampleInstance& inst, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidSpec, "p must be >= 1");
  return std::pow(0.5 * std::pow(2.0 * inst.R, p), 1.0 / p);
}

namespace {

kernels::CylinderShell band_shell(int d, double R, const EBand& band) {
  const double e = 1.0 / d;
  const double half = std::sqrt(std::max(0.0, std::pow(band.total, 2.0 * e) - std::pow(band.outer, 2.0 * e))) * R;
  return {half, std::pow(band.inner, e) * R, std::pow(band.outer, e) * R};
}

// Independent stream per (seed, purpose).
std::mt19937_64 stream(std::uint64_t seed, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose};
  return std::mt19937_64(seq);
}

// count points uniform in the ball (center, r), then their reflections through
// the center, each reduced to (x_1, |x'|), appended to out.
void meridian_pairs(std::mt19937_64& rng, int d, std::span<const double> center, double r, std::size_t count,
                    std::vector<double>& out) {
  std::vector<double> u(static_cast<std::size_t>(d));
  std::vector<double> drawn;
  drawn.reserve(2 * count);
  for (std::size_t k = 0; k < count; ++k) {
    kernels::uniform_in_ball(rng, d, r, u);
    double radial = 0.0;
    for (std::size_t a = 1; a < u.size(); ++a) radial += u[a] * u[a];
    radial = std::sqrt(radial);
    drawn.push_back(center[0] + u[0]);
    drawn.push_back(radial);
  }
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(drawn[2 * k]);
    out.push_back(drawn[2 * k + 1]);
  }
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(2.0 * center[0] - drawn[2 * k]);
    out.push_back(drawn[2 * k + 1]);
  }
}

}  // namespace

double sigma_E_analytic(int d, const EBand& band) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "sigma(E) needs d >= 2");
  const double R = rad_ball(d, 0.5);
  const auto shell = band_shell(d, R, band);
  return 2.0 * shell.half_length * (vol_ball(d - 1, shell.outer) - vol_ball(d - 1, shell.inner));
}

MonteCarloEstimate sigma_E_montecarlo(int d, std::uint64_t n, std::uint64_t seed, const EBand& band) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "sigma(E) needs d >= 2");
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "sample count must be positive");
  const double R = rad_ball(d, 0.5);
  const double radius = rad_ball(d, band.total * 0.5);
  const auto hits = kernels::count_ball_samples_in_shell(d, radius, band_shell(d, R, band), n, seed);
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

double e_band_separation_margin(int d, std::size_t n, std::uint64_t seed) {
  const auto inst = build_counterexample(d);
  const auto shell = band_shell(d, inst.R, inst.band);
  const auto xs = sample_ball_union(inst.rho, n, seed);
  const auto ys = sample_ball_union(inst.sigma, n, seed ^ 0x9e3779b97f4a7c15ULL);
  const double bound = (std::pow(1.1, 1.0 / d) - 1.0) * inst.R;
  double margin = INFINITY;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const auto y = ys.point(j);
    if (!shell.contains(y)) continue;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto x = xs.point(i);
      double sq = 0.0;
      for (std::size_t a = 1; a < x.size(); ++a) sq += (x[a] - y[a]) * (x[a] - y[a]);
      margin = std::min(margin, std::sqrt(sq) - bound);
    }
  }
  return margin;
}

std::string to_string(GapMode mode) {
  switch (mode) {
    case GapMode::Meridian: return "meridian";
    case GapMode::Sample: return "sample";
    case GapMode::Grid: return "grid";
  }
  return "unknown";
}

GapMode parse_gap_mode(const std::string& text) {
  if (text == "meridian") return GapMode::Meridian;
  if (text == "sample") return GapMode::Sample;
  if (text == "grid") return GapMode::Grid;
  throw Error(ErrorCode::ParseError, "unknown mode '" + text + "' (meridian|sample|grid)");
}

std::string Discretization::describe() const {
  std::ostringstream out;
  out << to_string(mode);
  if (mode == GapMode::Grid) {
    out << " spacing=" << spacing << " subsamples=" << subsamples;
  } else {
    out << " n=" << n;
  }
  return out.str();
}

GapSamples discretize_counterexample(const CounterexampleInstance& inst, const Discretization& disc,
                                     std::uint64_t seed) {
  const int d = inst.d;
  switch (disc.mode) {
    case GapMode::Meridian: {
      if (disc.n < 4 || disc.n % 4 != 0) throw Error(ErrorCode::InvalidSpec, "meridian mode needs n divisible by 4");
      auto rng = stream(seed, 1);
      std::vector<double> rho;
      std::vector<double> sigma;
      rho.reserve(2 * disc.n);
      sigma.reserve(2 * disc.n);
      for (std::size_t b = 0; b < 2; ++b) {
        meridian_pairs(rng, d, inst.rho.centers()[b], inst.rho.radii()[b], disc.n / 4, rho);
      }
      meridian_pairs(rng, d, inst.sigma.centers()[0], inst.sigma.radii()[0], disc.n / 2, sigma);
      return {DiscreteMeasure::from_flat(2, std::move(rho), std::vector<double>(disc.n, 1.0)),
              DiscreteMeasure::from_flat(2, std::move(sigma), std::vector<double>(disc.n, 1.0))};
    }
    case GapMode::Sample: {
      auto rng = stream(seed, 2);
      const std::uint64_t a = rng();
      const std::uint64_t b = rng();
      return {sample_ball_union(inst.rho, disc.n, a), sample_ball_union(inst.sigma, disc.n, b)};
    }
    case GapMode::Grid: {
      const double h = disc.spacing;
      GridSpec grid;
      const double reach = inst.sigma.radii()[0];
      for (int a = 0; a < d; ++a) {
        const double lo = -reach;
        const double hi = a == 0 ? 3.0 * inst.R : reach;
        const double first = std::floor(lo / h) - 1.0;
        const double last = std::ceil(hi / h) + 1.0;
        grid.origin.push_back(first * h);
        grid.spacing.push_back(h);
        grid.shape.push_back(static_cast<std::size_t>(last - first));
      }
      DiscretizeOptions options;
      options.subsamples = disc.subsamples;
      return {discretize_ball_union(inst.rho, grid, options).measure.to_discrete(),
              discretize_ball_union(inst.sigma, grid, options).measure.to_discrete()};
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown discretization mode");
}

std::vector<GapRecord> gap_curve(int d, const std::vector<double>& p_list, const Discretization& disc,
                                 std::uint64_t seed) {
  const auto inst = build_counterexample(d);
  auto samples = discretize_counterexample(inst, disc, seed);
  TransportProblem problem(std::move(samples.rho), std::move(samples.sigma));
  std::vector<GapRecord> records;
  records.reserve(p_list.size());
  for (double p : p_list) {
    problem.solve(CostExponent(p));
    const double estimate = std::pow(problem.last_cost(), 1.0 / p);
    const double exact = wp_mu_nu_exact(inst, p);
    records.push_back({d, p, exact, estimate, estimate - exact, disc, seed});
  }
  return records;
}

ThresholdResult find_p_threshold(int d, double tol_p, const Discretization& disc, std::uint64_t seed) {
  if (!(tol_p > 0.0)) throw Error(ErrorCode::InvalidSpec, "tol_p must be positive");
  const auto inst = build_counterexample(d);
  auto samples = discretize_counterexample(inst, disc, seed);
  TransportProblem problem(std::move(samples.rho), std::move(samples.sigma));
  int solves = 0;
  auto gap = [&](double p) {
    problem.solve(CostExponent(p));
    ++solves;
    return std::pow(problem.last_cost(), 1.0 / p) - wp_mu_nu_exact(inst, p);
  };
  const double g1 = gap(1.0);
  const double g2 = gap(2.0);
  if (!(g1 > 0.0) || !(g2 <= 0.0)) {
    throw Error(ErrorCode::NoSignChange, "gap(1) = " + std::to_string(g1) + ", gap(2) = " + std::to_string(g2) +
                                             " at " + disc.describe());
  }
  double lo = 1.0;
  double hi = 2.0;
  while (hi - lo > tol_p) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0) lo = mid; else hi = mid;
  }
  return {0.5 * (lo + hi), g1, g2, solves};
}

BoundCheck t_minus_tp_bound_check(double p, const std::vector<double>& t_grid) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidSpec, "p must be >= 1");
  double worst = -INFINITY;
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidSpec, "t must be >= 0");
    worst = std::max(worst, t - std::pow(t, p));
  }
  return {worst <= p - 1.0 + 1e-12, worst, p - 1.0};
}

}  // namespace wproj
