#pragma once

#include <string>

#include "tsgag/quadrature.hpp"

namespace tsgag {

/// Demonstration that constants separate the translation-invariant energy
/// from a one-sided Riemann-Liouville derivative norm on [a, b]: the former
/// vanishes on constants, the latter does not.
struct RLDemoReport {
  double a = 0, b = 0;
  double alpha = 0.5, p = 2;
  double gagliardo_of_constant = 0;
  double rl_norm_of_constant = 0;  // +inf flagged via rl_in_lp = false
  bool rl_in_lp = false;           // alpha * p < 1
  std::string conclusion;
};

/// c * (t-a)^{-alpha} / Gamma(1-alpha), t > a, alpha in (0,1).
double rl_derivative_of_constant(double c, double a, double alpha, double t);

/// Closed-form L^p(a,b) norm of the RL derivative of the constant 1,
/// together with the (exactly zero) Gagliardo seminorm of the same constant.
RLDemoReport one_sided_gap_demo(double a, double b, double alpha, double p,
                                const QuadConfig& cfg);

}  // namespace tsgag
