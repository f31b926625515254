#pragma once

#include <optional>
#include <string>

#include "tsgag/gagliardo.hpp"

namespace tsgag {

enum class InequalityName {
  Poincare,
  DiscretePoincare,
  CrossBounds,
  Coercivity,
  Hardy,
  Ckn,
};

const char* inequality_name(InequalityName name);

/// Outcome of one inequality check on one scenario. `ratio` is lhs/rhs
/// (0 when both sides vanish); `holds` is the verdict against
/// `constant_used` plus quadrature tolerance.
struct InequalityReport {
  InequalityName name = InequalityName::Poincare;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double constant_used = 0;
  bool holds = false;
  double err_est = 0;
  std::string scenario_id;
  std::string note;

  struct ParamSet {
    std::optional<double> alpha, p, beta, theta, q, x0;
  } params;
};

/// Sandwich of the kernel-weighted vs unweighted cross-component increment
/// integrals, with c0 = diam^{-(1+alpha p)} and C0 = delta0^{-(1+alpha p)}.
/// lhs/rhs aggregate all distinct ordered component pairs; the note carries
/// the worst-case margins.
InequalityReport cross_bounds_check(const TSFunction& u, const SeminormParams& prm,
                                    const TimeScale& ts, const QuadConfig& cfg,
                                    const std::string& scenario_id = {});

/// ||u - mean(u)||_p <= C_P [u]. A divergent seminorm counts as holding
/// (infinite right-hand side) and is annotated with ratio 0.
InequalityReport poincare_check(const TSFunction& u, const SeminormParams& prm,
                                const TimeScale& ts, double c_p,
                                const QuadConfig& cfg,
                                const std::string& scenario_id = {});

/// Smallest valid constant of the discrete weighted mean inequality among
/// component averages. p = 2 is an exact eigensolve; other p run projected
/// multistart maximization and report certified-lower/heuristic-upper.
struct DiscretePoincareConstant {
  double value = 0;            // the constant to use (upper)
  double certified_lower = 0;  // best ratio actually attained
  double heuristic_upper = 0;
};
DiscretePoincareConstant discrete_poincare_constant(const std::vector<double>& weights,
                                                    double p,
                                                    std::uint64_t seed = 0);

enum class PoincareMethod { Eigensolve, Sampling };

struct PoincareOptions {
  std::vector<int> cells_per_interval;  // empty = 64 per interval
  int samples = 100;                    // sampling method
  std::uint64_t seed = 0;
};

/// Estimate of the best Poincare constant. Eigensolve (p = 2 only) returns
/// lambda_min^{-1/2} of the discrete generalized problem; sampling returns
/// the max ratio over random sampled functions (a lower bound). Estimates,
/// not proofs.
struct PoincareEstimate {
  double value = 0;
  PoincareMethod method = PoincareMethod::Eigensolve;
};
PoincareEstimate poincare_constant(const SeminormParams& prm, const TimeScale& ts,
                                   PoincareMethod method, const PoincareOptions& opts,
                                   const QuadConfig& cfg);

/// ||u||_p <= C ([u] + |mean(u)|); C = max(C_P, measure^{1/p}) suffices.
InequalityReport coercivity_check(const TSFunction& u, const SeminormParams& prm,
                                  const TimeScale& ts, double constant,
                                  const QuadConfig& cfg,
                                  const std::string& scenario_id = {});

/// lhs = ∫ |u - mean(u)|^p |t - x0|^{-beta p} dμ, rhs = [u]^p. Requires
/// 0 <= beta < alpha and x0 in T. An atom at x0 is excluded from the
/// weighted integral and flagged in the note.
InequalityReport hardy_check(const TSFunction& u, const SeminormParams& prm,
                             double beta, double x0, const TimeScale& ts,
                             const QuadConfig& cfg,
                             const std::string& scenario_id = {});

/// Interpolation check: with 1/r = theta/p + (1-theta)/q and b = theta*beta,
/// verifies the Hoelder form
///   || |t-x0|^{-b} (u-mean) ||_r <= H^theta * Q^{1-theta}
/// (H, Q the weighted-p and plain-q norms) and reports the seminorm-based
/// constant C = C_H^theta * C_E^{1-theta} from the empirical ratios.
InequalityReport ckn_check(const TSFunction& u, const SeminormParams& prm, double q,
                           double theta, double beta, double x0, const TimeScale& ts,
                           const QuadConfig& cfg,
                           const std::string& scenario_id = {});

}  // namespace tsgag
