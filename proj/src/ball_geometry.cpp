#include "wproj/ball_geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "wproj/error.hpp"

namespace wproj {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log(pi^{n/2} / Gamma(n/2 + 1)), the log of the unit-ball volume.
double log_unit_ball_volume(int n) {
  const double half_n = 0.5 * n;
  return half_n * std::log(std::numbers::pi) - log_gamma(half_n + 1.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidSpec, "log_gamma requires x > 0");
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double series = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
    series += kLanczosCoef[k] / (z + static_cast<double>(k));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

double vol_ball(int n, double r) {
  if (n < 1) throw Error(ErrorCode::InvalidSpec, "ball dimension must be >= 1");
  if (r < 0.0) throw Error(ErrorCode::InvalidSpec, "ball radius must be >= 0");
  if (r == 0.0) return 0.0;
  return std::exp(log_unit_ball_volume(n) + n * std::log(r));
}

double rad_ball(int n, double v) {
  if (n < 1) throw Error(ErrorCode::InvalidSpec, "ball dimension must be >= 1");
  if (v < 0.0) throw Error(ErrorCode::InvalidSpec, "ball volume must be >= 0");
  if (v == 0.0) return 0.0;
  return std::exp((std::log(v) - log_unit_ball_volume(n)) / n);
}

}  // namespace wproj
