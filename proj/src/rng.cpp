#include "weaktraj/rng.hpp"

#include <cmath>

namespace weaktraj {

double FrameRng::uniform() {
  // 53-bit mantissa mapped into (0,1)
  return (double(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

std::uint64_t FrameRng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(mean) : poisson_ptrd(mean);
}

std::uint64_t FrameRng::poisson_inversion(double mean) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = uniform();
  while (prod > limit) {
    ++k;
    prod *= uniform();
  }
  return k;
}

// Hormann's PTRD transformed-rejection sampler.
std::uint64_t FrameRng::poisson_ptrd(double mean) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);

  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform();
    double us = 0.5 - std::abs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return std::uint64_t(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return std::uint64_t(kf);
  }
}

}  // namespace weaktraj
