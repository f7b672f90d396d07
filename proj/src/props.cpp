#include "wproj/props.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "wproj/ball_geometry.hpp"
#include "wproj/error.hpp"

namespace wproj {

CheckReport inequality_report(std::string name, double lhs, double rhs, double tolerance, std::string metadata) {
  const double slack = rhs - lhs;
  return {std::move(name), lhs, rhs, slack, tolerance, slack >= -tolerance, std::move(metadata)};
}

CheckReport identity_report(std::string name, double lhs, double rhs, double tolerance, std::string metadata) {
  const double slack = -std::abs(lhs - rhs);
  return {std::move(name), lhs, rhs, slack, tolerance, slack >= -tolerance, std::move(metadata)};
}

namespace {

int common_dim(const std::vector<const DiscreteMeasure*>& measures) {
  if (measures.empty()) throw Error(ErrorCode::EmptySupport, "no measures given");
  const int dim = measures.front()->dim();
  for (const auto* m : measures) {
    if (m->dim() != dim) throw Error(ErrorCode::DimMismatch, "measures differ in dim");
  }
  return dim;
}

std::string describe(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CheckGrid& grid) {
  std::ostringstream out;
  out << "d=" << mu.dim() << " atoms=" << mu.size() << "/" << nu.size() << " lambda=" << grid.lambda;
  if (mu.dim() == 1) {
    out << " n=" << grid.quantile_samples;
  } else {
    out << " spacing=" << grid.spacing;
  }
  return out.str();
}

ProjectionSpec1D spec_1d(const CheckGrid& grid, CostExponent p) {
  ProjectionSpec1D spec;
  spec.p = p;
  spec.lambda = grid.lambda;
  spec.n = grid.quantile_samples;
  return spec;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

GridSpec aligned_grid(const std::vector<const DiscreteMeasure*>& measures, double lambda, double spacing) {
  const int dim = common_dim(measures);
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidSpec, "spacing must be positive");
  const double pad = rad_ball(dim, 1.0 / lambda) + 2.0 * spacing;
  GridSpec grid;
  for (int a = 0; a < dim; ++a) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto* m : measures) {
      for (std::size_t i = 0; i < m->size(); ++i) {
        lo = std::min(lo, m->point(i)[static_cast<std::size_t>(a)]);
        hi = std::max(hi, m->point(i)[static_cast<std::size_t>(a)]);
      }
    }
    const double first = std::floor((lo - pad) / spacing);
    const double last = std::ceil((hi + pad) / spacing);
    grid.origin.push_back(first * spacing);
    grid.spacing.push_back(spacing);
    grid.shape.push_back(static_cast<std::size_t>(last - first));
  }
  return grid;
}

double instance_diameter(const std::vector<const DiscreteMeasure*>& measures, double lambda) {
  const int dim = common_dim(measures);
  double widest = 0.0;
  for (const auto* a : measures) {
    for (const auto* b : measures) {
      for (std::size_t i = 0; i < a->size(); ++i) {
        for (std::size_t j = 0; j < b->size(); ++j) {
          widest = std::max(widest, std::sqrt(squared_distance(a->point(i), b->point(j))));
        }
      }
    }
  }
  return widest + 2.0 * rad_ball(dim, 1.0 / lambda);
}

double grid_tolerance(const std::vector<const DiscreteMeasure*>& measures, const CheckGrid& grid) {
  return 4.0 * instance_diameter(measures, grid.lambda) * grid.spacing;
}

GridProjection project_on_grid(const DiscreteMeasure& mu, const GridSpec& grid, double lambda, CostExponent p) {
  CapacitatedInstance inst{mu, grid, lambda, p};
  auto projection = project_capacitated(inst);
  auto atoms = projection.plan.target;
  return {std::move(projection), std::move(atoms)};
}

CheckReport check_weak_nonexpansiveness(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CheckGrid& grid) {
  common_dim({&mu, &nu});
  const CostExponent two(2.0);
  const auto meta = describe(mu, nu, grid);
  if (mu.dim() == 1) {
    const auto spec = spec_1d(grid, two);
    const auto rho = project_quantile_of(mu, spec);
    const auto sigma = project_quantile_of(nu, spec);
    // Comonotone eta between rho and sigma composed with the monotone maps
    // T, U gives the comonotone coupling of mu and nu.
    const double lhs = quantile_distance_pow(rho, sigma, 2.0);
    const double rhs = quantile_distance_pow(QuantileFn::of(mu), QuantileFn::of(nu), 2.0);
    return inequality_report("weak_nonexpansiveness", lhs, rhs, 1e-6, meta);
  }
  const auto g = aligned_grid({&mu, &nu}, grid.lambda, grid.spacing);
  const auto rho = project_on_grid(mu, g, grid.lambda, two);
  const auto sigma = project_on_grid(nu, g, grid.lambda, two);
  const auto eta = solve_exact(rho.atoms, sigma.atoms, two);
  const auto a = solve_exact(rho.atoms, mu, two);
  const auto b = solve_exact(sigma.atoms, nu, two);
  const auto gamma = glue(eta, a, b);
  return inequality_report("weak_nonexpansiveness", plan_cost(eta, two), plan_cost(gamma, two),
                           grid_tolerance({&mu, &nu}, grid), meta);
}

CheckReport check_glued_plan_optimal_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw Error(ErrorCode::DimMismatch, "glued plan optimality is a 1-D check");
  const CostExponent two(2.0);
  const double glued = quantile_distance_pow(QuantileFn::of(mu), QuantileFn::of(nu), 2.0);
  return identity_report("glued_plan_optimal", glued, plan_cost(solve_exact(mu, nu, two), two), 1e-6,
                         "atoms=" + std::to_string(mu.size()) + "/" + std::to_string(nu.size()));
}

CheckReport check_nonexpansive(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p,
                               const CheckGrid& grid) {
  common_dim({&mu, &nu});
  auto meta = describe(mu, nu, grid) + " p=" + std::to_string(p.p);
  if (mu.dim() == 1) {
    const auto spec = spec_1d(grid, p);
    const double lhs = wasserstein_1d(project_quantile_of(mu, spec), project_quantile_of(nu, spec), p);
    return inequality_report("nonexpansive", lhs, wasserstein_1d(mu, nu, p), 1e-6, std::move(meta));
  }
  const auto g = aligned_grid({&mu, &nu}, grid.lambda, grid.spacing);
  const auto rho = project_on_grid(mu, g, grid.lambda, p);
  const auto sigma = project_on_grid(nu, g, grid.lambda, p);
  const double lhs = wasserstein(rho.atoms, sigma.atoms, p);
  return inequality_report("nonexpansive", lhs, wasserstein(mu, nu, p), grid_tolerance({&mu, &nu}, grid),
                           std::move(meta));
}

CheckReport check_barycenter_preservation(const DiscreteMeasure& mu, const CheckGrid& grid) {
  const CostExponent two(2.0);
  const auto before = barycenter(mu);
  auto meta = describe(mu, mu, grid);
  if (mu.dim() == 1) {
    const double after = project_quantile_of(mu, spec_1d(grid, two)).mean();
    return identity_report("barycenter", after, before[0], 1e-9, std::move(meta));
  }
  const auto g = aligned_grid({&mu}, grid.lambda, grid.spacing);
  const auto after = barycenter(project_on_grid(mu, g, grid.lambda, two).atoms);
  std::vector<double> delta(before.size());
  for (std::size_t a = 0; a < delta.size(); ++a) delta[a] = after[a] - before[a];
  return identity_report("barycenter", norm(delta), 0.0, 2.0 * grid.spacing, std::move(meta));
}

CheckReport check_translation_invariance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         std::span<const double> h, const CheckGrid& grid) {
  common_dim({&mu, &nu});
  if (h.size() != static_cast<std::size_t>(mu.dim())) throw Error(ErrorCode::DimMismatch, "shift has wrong dim");
  const CostExponent two(2.0);
  const auto shifted = translate(nu, h);
  auto meta = describe(mu, nu, grid) + " |h|=" + std::to_string(norm(h));
  if (mu.dim() == 1) {
    const auto spec = spec_1d(grid, two);
    const auto qmu = QuantileFn::of(mu);
    const auto pmu = project_quantile(qmu, spec);
    auto side = [&](const DiscreteMeasure& other) {
      const auto q = QuantileFn::of(other);
      return quantile_distance_pow(qmu, q, 2.0) - quantile_distance_pow(pmu, project_quantile(q, spec), 2.0);
    };
    return identity_report("translation_invariance", side(nu), side(shifted), 1e-6, std::move(meta));
  }
  for (std::size_t a = 0; a < h.size(); ++a) {
    const double k = h[a] / grid.spacing;
    if (std::abs(k - std::round(k)) > 1e-9) {
      throw Error(ErrorCode::InvalidSpec, "shift must be a multiple of the grid spacing");
    }
  }
  const auto g = aligned_grid({&mu, &nu, &shifted}, grid.lambda, grid.spacing);
  const auto pmu = project_on_grid(mu, g, grid.lambda, two);
  auto side = [&](const DiscreteMeasure& other) {
    const auto pother = project_on_grid(other, g, grid.lambda, two);
    return plan_cost(solve_exact(mu, other, two), two) -
           plan_cost(solve_exact(pmu.atoms, pother.atoms, two), two);
  };
  return identity_report("translation_invariance", side(nu), side(shifted),
                         grid_tolerance({&mu, &nu, &shifted}, grid), std::move(meta));
}

CheckReport check_geodesic_density_bound_1d(const QuantileFn& q0, const QuantileFn& q1,
                                            const std::vector<double>& t_list, double lambda) {
  if (q0.mode() != QuantileFn::Mode::Linear || q1.mode() != QuantileFn::Mode::Linear) {
    throw Error(ErrorCode::InfeasibleInput, "endpoints must be absolutely continuous");
  }
  const double min_slope = 1.0 / lambda - 1e-9;
  if (q0.min_slope() < min_slope || q1.min_slope() < min_slope) {
    throw Error(ErrorCode::InfeasibleInput, "an endpoint has density above lambda");
  }
  std::vector<double> t;
  std::merge(q0.breakpoints().begin(), q0.breakpoints().end(), q1.breakpoints().begin(), q1.breakpoints().end(),
             std::back_inserter(t));
  t.erase(std::unique(t.begin(), t.end()), t.end());
  double worst = 0.0;
  for (double s : t_list) {
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const double dt = t[k + 1] - t[k];
      if (!(dt > 0.0)) continue;
      const auto [a0, a1] = q0.on_segment(t[k], t[k + 1]);
      const auto [b0, b1] = q1.on_segment(t[k], t[k + 1]);
      const double rise = (1.0 - s) * (a1 - a0) + s * (b1 - b0);
      worst = std::max(worst, rise > 0.0 ? dt / rise : INFINITY);
    }
  }
  return inequality_report("geodesic_density_bound", worst, lambda, 1e-9,
                           "interpolants=" + std::to_string(t_list.size()));
}

CheckReport check_glued_plan_continuity(double radius, double eps, const CheckGrid& grid) {
  const CostExponent two(2.0);
  const auto mu = DiscreteMeasure::create({{radius, 0.0}, {-radius, 0.0}}, {0.5, 0.5});
  // Rows: mu atoms; columns: the upper atom (t, 1), then the lower one (-t, -1).
  auto plans = [&](double t) {
    const auto nu = DiscreteMeasure::create({{t, 1.0}, {-t, -1.0}}, {0.5, 0.5});
    std::array<double, 4> optimal{};
    for (const auto& e : solve_exact(mu, nu, two).entries) optimal[e.source * 2 + e.target] += e.mass;
    const auto g = aligned_grid({&mu, &nu}, grid.lambda, grid.spacing);
    const auto rho = project_on_grid(mu, g, grid.lambda, two);
    const auto sigma = project_on_grid(nu, g, grid.lambda, two);
    const auto gamma = glue(solve_exact(rho.atoms, sigma.atoms, two), solve_exact(rho.atoms, mu, two),
                            solve_exact(sigma.atoms, nu, two));
    std::array<double, 4> glued{};
    for (const auto& e : gamma.entries) glued[e.source * 2 + e.target] += e.mass;
    return std::pair{optimal, glued};
  };
  const auto [opt_plus, glued_plus] = plans(eps);
  const auto [opt_minus, glued_minus] = plans(-eps);
  double tv_opt = 0.0;
  double tv_glued = 0.0;
  bool same_support = true;
  for (std::size_t k = 0; k < 4; ++k) {
    tv_opt += 0.5 * std::abs(opt_plus[k] - opt_minus[k]);
    tv_glued += 0.5 * std::abs(glued_plus[k] - glued_minus[k]);
    same_support = same_support && ((glued_plus[k] > 1e-12) == (glued_minus[k] > 1e-12));
  }
  const bool flipped = tv_opt > 0.5;
  auto report = inequality_report("glued_plan_continuity", tv_glued, tv_opt, 0.0,
                                  "R=" + std::to_string(radius) + " eps=" + std::to_string(eps) +
                                      " spacing=" + std::to_string(grid.spacing));
  report.pass = report.pass && flipped && same_support && tv_glued < tv_opt;
  return report;
}

}  // namespace wproj

namespace wproj {

DiscreteMeasure random_measure(int dim, std::size_t atoms, std::mt19937_64& rng, double extent) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<double> coords(atoms * static_cast<std::size_t>(dim));
  std::vector<double> weights(atoms);
  for (double& c : coords) c = coord(rng);
  for (double& w : weights) w = weight(rng);
  return DiscreteMeasure::from_flat(dim, std::move(coords), std::move(weights));
}

QuantileFn random_interval_mixture(std::mt19937_64& rng, std::size_t pieces, double lambda) {
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, pieces));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = count(rng);
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 1; i < k; ++i) cuts.push_back(unit(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> t{0.0};
  std::vector<double> v;
  double left = 2.0 * unit(rng) - 1.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mass = cuts[i + 1] - cuts[i];
    if (!v.empty()) {
      t.push_back(cuts[i]);
      left += unit(rng);  // gap before this interval
    }
    v.push_back(left);
    left += mass / lambda;
    v.push_back(left);
    t.push_back(cuts[i + 1]);
  }
  t.back() = 1.0;
  return QuantileFn::linear(std::move(t), std::move(v));
}

std::vector<SuiteRow> verify_instance(int d, CostExponent p, std::uint64_t seed, const CheckGrid& grid) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d)};
  std::mt19937_64 rng(seq);
  const bool quadratic = p.p == 2.0;
  std::vector<SuiteRow> rows;
  auto add = [&](CheckReport r, bool enforced) { rows.push_back({std::move(r), d, p.p, seed, enforced}); };

  if (d == 1) {
    std::uniform_int_distribution<std::size_t> atoms(1, 50);
    const auto mu = random_measure(1, atoms(rng), rng, 2.0);
    const auto nu = random_measure(1, atoms(rng), rng, 2.0);
    add(check_nonexpansive(mu, nu, p, grid), quadratic);
    if (quadratic) {
      add(check_weak_nonexpansiveness(mu, nu, grid), true);
      add(check_glued_plan_optimal_1d(mu, nu), true);
      add(check_barycenter_preservation(mu, grid), true);
      std::uniform_real_distribution<double> shift(-1.0, 1.0);
      const std::vector<double> h{shift(rng)};
      add(check_translation_invariance(mu, nu, h, grid), true);
    }
    const auto q0 = random_interval_mixture(rng, 4, grid.lambda);
    const auto q1 = random_interval_mixture(rng, 4, grid.lambda);
    add(check_geodesic_density_bound_1d(q0, q1, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, grid.lambda), true);
    return rows;
  }

  std::uniform_int_distribution<std::size_t> atoms(1, 4);
  const auto mu = random_measure(d, atoms(rng), rng);
  const auto nu = random_measure(d, atoms(rng), rng);
  Point at(static_cast<std::size_t>(d));
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (double& x : at) x = coord(rng);
  const auto dirac = DiscreteMeasure::dirac(at);
  add(check_nonexpansive(mu, nu, p, grid), false);
  add(check_nonexpansive(mu, dirac, p, grid), quadratic);
  if (quadratic) {
    add(check_weak_nonexpansiveness(mu, nu, grid), true);
    add(check_barycenter_preservation(mu, grid), true);
    std::uniform_int_distribution<int> cells(-10, 10);
    std::vector<double> h(static_cast<std::size_t>(d), 0.0);
    for (double& x : h) x = cells(rng) * grid.spacing;
    add(check_translation_invariance(mu, nu, h, grid), true);
  }
  return rows;
}

}  // namespace wproj
