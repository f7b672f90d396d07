#pragma once

#include <cmath>
#include <random>

namespace wproj::kernels {

template <class Rng>
void uniform_in_ball(Rng& rng, int dim, double r, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      out[static_cast<std::size_t>(k)] = gauss(rng);
      norm2 += out[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(k)];
    }
  } while (norm2 == 0.0);
  const double scale = r * std::pow(unif(rng), 1.0 / dim) / std::sqrt(norm2);
  for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] *= scale;
}

}  // namespace wproj::kernels
