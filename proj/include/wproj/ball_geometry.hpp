#pragma once

namespace wproj {

/// Natural log of Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
double log_gamma(double x);

/// Volume of the n-dimensional Euclidean ball of radius r.
double vol_ball(int n, double r);

/// Radius of the n-dimensional Euclidean ball of volume v; inverse of vol_ball in r.
double rad_ball(int n, double v);

}  // namespace wproj
