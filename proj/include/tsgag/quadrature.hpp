#pragma once

#include <functional>
#include <vector>

#include "tsgag/errors.hpp"

namespace tsgag {

/// Tolerances and refinement limits for the adaptive panel quadrature used
/// throughout the library.
struct QuadConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int panel_order = 8;           // Gauss-Legendre nodes per panel
  int max_refinement_depth = 40; // bisection depth / graded band count
  double diagonal_cutoff_eta = 0.0;  // >0 truncates |t-s| < eta; 0 = fully adaptive
  bool reproducible = true;      // fixed left-to-right summation order

  void validate() const;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (order >= 2).
const GaussRule& gauss_rule(int order);

struct QuadResult {
  double value = 0;
  double err_est = 0;
  bool converged = true;
};

/// A point where the integrand behaves like |t - position|^exponent with
/// exponent in (-1, 1): panels are geometrically graded toward it.
struct GradedPoint {
  double position = 0;
  double exponent = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive integration of f over [a, b].
///
/// `breakpoints` lists interior kinks (panel boundaries are forced there);
/// `graded` lists algebraic singular points handled by geometric panel
/// grading plus tail extrapolation. Non-integrable growth at a graded point
/// (exponent <= -1) is reported via converged = false rather than thrown, so
/// callers can distinguish divergence from refinement failure.
QuadResult integrate_interval(const Integrand& f, double a, double b,
                              const std::vector<double>& breakpoints,
                              const std::vector<GradedPoint>& graded,
                              const QuadConfig& cfg, double tol_abs);

/// Like integrate_interval, but derives the absolute tolerance from a cheap
/// coarse pass over the segments so refinement decisions scale with the
/// integrand (required for the exact-homogeneity contract of the seminorm).
/// `rel_mult` tightens (<1) or loosens (>1) the relative target.
QuadResult integrate_interval_auto(const Integrand& f, double a, double b,
                                   const std::vector<double>& breakpoints,
                                   const std::vector<GradedPoint>& graded,
                                   const QuadConfig& cfg, double rel_mult = 1.0);

/// Outcome of a near-diagonal band loop for Gagliardo-type kernels: nested
/// dyadic bands [L 2^{-k-1}, L 2^{-k}] toward the diagonal r = 0, with the
/// running total monitored for monotone growth (the outside-the-space
/// verdict) and the geometric tail extrapolated from the band decay.
struct BandLoopResult {
  double value = 0;
  double err_est = 0;
  bool diverged = false;      // running total kept growing under refinement
  bool converged = true;      // quadrature-level convergence of the bands
};

}  // namespace tsgag
