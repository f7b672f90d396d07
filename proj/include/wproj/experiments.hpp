#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wproj/measures.hpp"
#include "wproj/transport.hpp"

namespace wproj {

/// The band E = {c_in^{1/d} R <= |y'| <= c_out^{1/d} R, |y_1| <= sqrt(c_tot^{2/d} - c_out^{2/d}) R}.
struct EBand {
  double inner = 1.1;
  double outer = 1.9;
  double total = 2.0;
};

/// mu = (delta_0 + delta_{2R e_1}) / 2 and nu = delta_0 with R = Rad_d(1/2),
/// together with their projections for lambda = 1.
struct CounterexampleInstance {
  int d;
  double R;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  BallUnionMeasure rho;
  BallUnionMeasure sigma;
  EBand band;
};

CounterexampleInstance build_counterexample(int d);  // DimensionTooSmall for d < 2

/// (R^p 2^{p-1})^{1/p}: the only plan moves mass 1/2 over distance 2R.
double wp_mu_nu_exact(const CounterexampleInstance& inst, double p);

double sigma_E_analytic(int d, const EBand& band = {});

struct MonteCarloEstimate {
  double value;
  double standard_error;
  std::uint64_t samples;
};
/// Fraction of n uniform points of supp sigma lying in E.
MonteCarloEstimate sigma_E_montecarlo(int d, std::uint64_t n, std::uint64_t seed, const EBand& band = {});

/// Smallest |x' - y'| - (1.1^{1/d} - 1) R over n sampled x in supp rho and
/// the sampled y of supp sigma that fall in E; >= -1e-12 is expected.
double e_band_separation_margin(int d, std::size_t n, std::uint64_t seed);

/// How W_p(rho, sigma) is estimated.
///  Meridian: rho and sigma are invariant under rotations about the x_1
///    axis, so W_p equals the transport cost between their images under
///    x -> (x_1, |x'|) with the Euclidean cost of the half-plane. Each rho
///    ball gets n/2 points and sigma n points, drawn in antithetic pairs
///    x, 2c - x around the ball center c.
///  Sample: n i.i.d. points of each measure in R^d.
///  Grid: midpoint discretization of both measures on one grid.
enum class GapMode { Meridian, Sample, Grid };

std::string to_string(GapMode mode);
GapMode parse_gap_mode(const std::string& text);  // ParseError

struct Discretization {
  GapMode mode = GapMode::Meridian;
  std::size_t n = 2000;    // points per measure (Meridian: multiple of 4)
  double spacing = 0.02;   // Grid mode
  int subsamples = 3;      // Grid mode, per axis

  std::string describe() const;
};

struct GapRecord {
  int d;
  double p;
  double wp_mu_nu;
  double wp_rho_sigma;
  double gap;  // wp_rho_sigma - wp_mu_nu
  Discretization discretization;
  std::uint64_t seed;
};

/// The two discretized measures whose transport cost estimates W_p(rho, sigma).
struct GapSamples {
  DiscreteMeasure rho;
  DiscreteMeasure sigma;
};
GapSamples discretize_counterexample(const CounterexampleInstance& inst, const Discretization& disc,
                                     std::uint64_t seed);

/// Gap at each p, reusing one discretization and warm-starting the solver across p.
std::vector<GapRecord> gap_curve(int d, const std::vector<double>& p_list, const Discretization& disc,
                                 std::uint64_t seed);

struct ThresholdResult {
  double p_hat;
  double gap_at_1;
  double gap_at_2;
  int solves;
};

/// Bisection for the sign change of gap(p) on [1, 2] at one discretization;
/// NoSignChange unless gap(1) > 0 >= gap(2).
ThresholdResult find_p_threshold(int d, double tol_p, const Discretization& disc, std::uint64_t seed);

/// max over the grid of t - t^p, compared with p - 1 (+1e-12).
struct BoundCheck {
  bool pass;
  double max_lhs;
  double bound;
};
BoundCheck t_minus_tp_bound_check(double p, const std::vector<double>& t_grid);

}  // namespace wproj
