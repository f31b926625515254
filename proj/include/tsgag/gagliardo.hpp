#pragma once

#include <functional>

#include "tsgag/integrate.hpp"

namespace tsgag {

/// Order and exponent of the fractional seminorm. `kernel_exponent`, when
/// set, replaces the constant order by a symmetric variable order
/// alpha(t,s); it is evaluated on the canonicalized pair (max, min), which
/// enforces the symmetry the splitting shortcuts rely on.
struct SeminormParams {
  double alpha = 0.5;
  double p = 2.0;
  std::function<double(double, double)> kernel_exponent;

  void validate() const;
  /// 1 + p*alpha(t,s).
  double kexp(double t, double s) const;
  bool variable_order() const { return static_cast<bool>(kernel_exponent); }
};

struct CCSplit {
  double intra = 0;  // same-interval pairs
  double inter = 0;  // distinct-interval pairs
  double total() const { return intra + inter; }
};

/// Seminorm with the continuous/discrete/mixed decomposition of value^p.
/// When `diverged` is set the near-diagonal refinement showed monotone
/// unbounded growth (u outside the space); value is +inf and the split
/// fields hold the partial sums accumulated before detection.
struct SeminormResult {
  double value = 0;
  CCSplit cc;
  double dd = 0;
  double mixed = 0;
  double err_est = 0;
  bool diverged = false;

  double total_p() const { return cc.total() + dd + mixed; }
};

/// Gagliardo seminorm of u on T. `transposed` swaps the roles of t and s in
/// every block (loop order, increment sign); the result is the same by
/// symmetry of the kernel and is exercised as such in the test suite.
SeminormResult seminorm(const TSFunction& u, const SeminormParams& prm,
                        const TimeScale& ts, const QuadConfig& cfg,
                        bool transposed = false);

/// Brute-force estimate of value^p: uniform n-by-n tensor midpoint rule on
/// interval blocks (cells meeting the diagonal excluded), exact sums on atom
/// blocks, uniform 1-D midpoint rule on mixed blocks. Deterministic, no
/// adaptivity; deliberately independent of the production path.
double seminorm_oracle(const TSFunction& u, const SeminormParams& prm,
                       const TimeScale& ts, int n);

/// ||u||_{L^p} + [u]; throws DivergentSeminorm when the seminorm is infinite.
double wnorm(const TSFunction& u, const SeminormParams& prm, const TimeScale& ts,
             const QuadConfig& cfg);

}  // namespace tsgag
