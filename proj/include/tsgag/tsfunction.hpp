#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tsgag/timescale.hpp"

namespace tsgag {

struct ConstantFn {
  double value = 0;
};

struct LinearFn {
  double slope = 0;
  double intercept = 0;
};

/// scale * |t - center|^exponent + offset. For exponent < 0 the function is
/// singular at `center`; pointwise evaluation there is an error and the
/// integrators route panels around it.
struct PowerFn {
  double center = 0;
  double exponent = 0;
  double scale = 1;
  double offset = 0;
};

/// `inside` on [lo, hi], `outside` elsewhere.
struct IndicatorFn {
  double lo = 0;
  double hi = 0;
  double inside = 1;
  double outside = 0;
};

/// Piecewise-linear interpolant of (grid, values); constant beyond the
/// first/last knot within the component.
struct SamplesFn {
  std::vector<double> grid;
  std::vector<double> values;
};

using Payload = std::variant<ConstantFn, LinearFn, PowerFn, IndicatorFn, SamplesFn>;

/// A real function on a TimeScale, one payload per component (aligned with
/// the component order of the scale it was built against).
class TSFunction {
 public:
  TSFunction() = default;

  static TSFunction constant(const TimeScale& ts, double c);
  static TSFunction linear(const TimeScale& ts, double slope, double intercept);
  static TSFunction power(const TimeScale& ts, double center, double exponent,
                          double scale = 1, double offset = 0);
  static TSFunction indicator(const TimeScale& ts, double lo, double hi);
  /// One payload per component, validated against the scale.
  static TSFunction from_payloads(const TimeScale& ts, std::vector<Payload> payloads);

  std::size_t component_count() const { return payloads_.size(); }
  const Payload& payload(std::size_t comp) const { return payloads_[comp]; }

  /// Evaluate the component payload at t (t must lie in that component).
  double eval_component(std::size_t comp, double t) const;
  /// u(s + r) - u(s) within one component, computed without the cancellation
  /// of two nearby evaluations (r may be far below machine precision of s).
  double increment(std::size_t comp, double s, double r) const;
  /// Evaluate at t in T; throws X0NotInT-style DomainError when t is outside.
  double eval(const TimeScale& ts, double t) const;
  /// Value at the atom of component `comp`.
  double atom_value(const TimeScale& ts, std::size_t comp) const;

  /// scale*u + shift, exact on every payload kind.
  TSFunction affine(double scale, double shift) const;
  /// u + v for structurally compatible payloads (same kinds; samples need
  /// identical grids). Used by the property suites.
  static TSFunction add(const TSFunction& u, const TSFunction& v);

  /// Interior kinks of the payload on component `comp` (indicator edges,
  /// sample knots); integration panels are cut there.
  std::vector<double> breakpoints(std::size_t comp) const;

  struct SingularPoint {
    double position = 0;
    double exponent = 0;  // of the payload itself, not of |.|^p
  };
  /// Algebraic singular/non-smooth points of the payload on `comp`.
  std::vector<SingularPoint> singularities(std::size_t comp) const;

 private:
  explicit TSFunction(std::vector<Payload> payloads) : payloads_(std::move(payloads)) {}

  std::vector<Payload> payloads_;
};

double eval_payload(const Payload& payload, double t);

}  // namespace tsgag
