#pragma once

#include <cmath>
#include <random>

#include "tsgag/gagliardo.hpp"
#include "tsgag/random_functions.hpp"

namespace tsgag::test {

inline bool close_abs(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * std::max(scale, 1e-300);
}

/// Random (T, u, alpha, p) draw for the property suites. Orders are kept
/// away from 1 and exponents moderate so every draw lies in the convergent
/// regime for sampled (piecewise-linear) functions.
struct RandomScenario {
  TimeScale ts;
  TSFunction u;
  SeminormParams prm;
};

inline RandomScenario random_scenario(std::mt19937_64& rng, int max_components = 4) {
  RandomScenario out{random_hybrid_timescale(rng, max_components), {}, {}};
  out.u = random_sampled_function(out.ts, rng);
  out.prm.alpha = std::uniform_real_distribution<double>(0.15, 0.85)(rng);
  out.prm.p = std::uniform_real_distribution<double>(1.0, 2.5)(rng);
  return out;
}

/// Oracle resolution-error estimate from two resolutions and the known decay
/// rate of the dominant error term (diagonal-band exclusion, p(1-alpha)).
inline double oracle_error_estimate(double o_n, double o_half, double alpha, double p) {
  const double rate = std::min(p * (1.0 - alpha), 1.0);
  const double factor = std::pow(2.0, rate) - 1.0;
  return 3.0 * std::abs(o_n - o_half) / std::max(factor, 0.05) + 1e-10;
}

}  // namespace tsgag::test
