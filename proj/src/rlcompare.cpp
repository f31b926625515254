#include "tsgag/rlcompare.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tsgag/gagliardo.hpp"

namespace tsgag {

double rl_derivative_of_constant(double c, double a, double alpha, double t) {
  if (!(alpha > 0) || !(alpha < 1)) {
    fail(ErrorCode::DomainError, "alpha must lie in (0,1)");
  }
  if (!(t > a)) fail(ErrorCode::TAtOrBelowA, "need t > a");
  return c * std::pow(t - a, -alpha) / std::tgamma(1.0 - alpha);
}

RLDemoReport one_sided_gap_demo(double a, double b, double alpha, double p,
                                const QuadConfig& cfg) {
  if (!(a < b)) fail(ErrorCode::DomainError, "need a < b");
  if (!(alpha > 0) || !(alpha < 1)) {
    fail(ErrorCode::DomainError, "alpha must lie in (0,1)");
  }
  if (!(p >= 1)) fail(ErrorCode::DomainError, "p must be >= 1");

  RLDemoReport rep;
  rep.a = a;
  rep.b = b;
  rep.alpha = alpha;
  rep.p = p;

  // The seminorm of a constant is computed, not assumed: increments vanish
  // pointwise so every block integrates zero exactly.
  TimeScale ts = TimeScale::build({{{a, b}}, {}});
  TSFunction one = TSFunction::constant(ts, 1.0);
  SeminormParams prm;
  prm.alpha = alpha;
  prm.p = p;
  rep.gagliardo_of_constant = seminorm(one, prm, ts, cfg).value;

  rep.rl_in_lp = alpha * p < 1.0;
  if (rep.rl_in_lp) {
    const double g = std::tgamma(1.0 - alpha);
    rep.rl_norm_of_constant = std::pow(
        std::pow(b - a, 1.0 - alpha * p) / ((1.0 - alpha * p) * std::pow(g, p)),
        1.0 / p);
  } else {
    rep.rl_norm_of_constant = std::numeric_limits<double>::infinity();
  }

  std::ostringstream oss;
  oss << "constant function: translation-invariant energy = "
      << rep.gagliardo_of_constant << ", one-sided RL derivative norm ";
  if (rep.rl_in_lp) {
    oss << "= " << rep.rl_norm_of_constant;
  } else {
    oss << "infinite (alpha*p >= 1)";
  }
  oss << "; no one-sided norm equivalence can hold on the full space";
  rep.conclusion = oss.str();
  return rep;
}

}  // namespace tsgag
