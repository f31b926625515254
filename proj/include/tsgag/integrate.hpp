#pragma once

#include "tsgag/quadrature.hpp"
#include "tsgag/tsfunction.hpp"

namespace tsgag {

struct IntegralValue {
  double value = 0;
  double err_est = 0;
};

/// ∫_T u dμ_Δ: adaptive quadrature on interval components, exact weighted
/// point evaluation on atoms. Throws NonconvergedQuadrature if refinement
/// runs out of depth with the error estimate above tolerance.
IntegralValue delta_integral(const TSFunction& u, const TimeScale& ts,
                             const QuadConfig& cfg);

/// (∫_T |u|^p dμ_Δ)^{1/p}, p >= 1.
double lp_norm(const TSFunction& u, double p, const TimeScale& ts,
               const QuadConfig& cfg);

/// Global μ_Δ-mean of u over T.
double average(const TSFunction& u, const TimeScale& ts, const QuadConfig& cfg);

/// Mean of u over a single component.
double component_average(const TSFunction& u, const TimeScale& ts,
                         std::size_t comp, const QuadConfig& cfg);

/// ∫_T |v|^p · |t - x0|^{-weight_exp} dμ_Δ with the weight's singularity at
/// x0 handled by graded panels. When x0 is an atom of T, that atom's own
/// term is excluded (off-diagonal convention) and atom_excluded is set.
/// A non-integrable weight is reported via diverged instead of an error.
struct WeightedIntegral {
  double value = 0;
  double err_est = 0;
  bool diverged = false;
  bool atom_excluded = false;
};
WeightedIntegral weighted_power_integral(const TSFunction& v, double p,
                                         double weight_exp, double x0,
                                         const TimeScale& ts,
                                         const QuadConfig& cfg);

}  // namespace tsgag
