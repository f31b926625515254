#include "tsgag/tsfunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsgag {

namespace {

void validate_against(const TimeScale& ts, const std::vector<Payload>& payloads) {
  if (payloads.size() != ts.component_count()) {
    std::ostringstream oss;
    oss << "function has " << payloads.size() << " payloads for "
        << ts.component_count() << " components";
    fail(ErrorCode::DomainError, oss.str());
  }
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    const Component& c = ts.components()[i];
    if (const auto* s = std::get_if<SamplesFn>(&payloads[i])) {
      if (s->grid.size() != s->values.size() || s->grid.size() < 2) {
        fail(ErrorCode::DomainError, "samples payload needs >= 2 matching grid/value entries");
      }
      if (!std::is_sorted(s->grid.begin(), s->grid.end())) {
        fail(ErrorCode::DomainError, "sample grid must be sorted");
      }
      if (s->grid.front() < c.lo() - 1e-12 || s->grid.back() > c.hi() + 1e-12) {
        fail(ErrorCode::DomainError, "sample grid extends outside its component");
      }
    }
  }
}

}  // namespace

double eval_payload(const Payload& payload, double t) {
  if (const auto* c = std::get_if<ConstantFn>(&payload)) return c->value;
  if (const auto* l = std::get_if<LinearFn>(&payload)) return l->slope * t + l->intercept;
  if (const auto* p = std::get_if<PowerFn>(&payload)) {
    const double d = std::abs(t - p->center);
    if (d == 0 && p->exponent < 0) {
      std::ostringstream oss;
      oss << "power payload evaluated at its singular point t=" << t;
      fail(ErrorCode::SingularEvaluation, oss.str());
    }
    return p->scale * std::pow(d, p->exponent) + p->offset;
  }
  if (const auto* ind = std::get_if<IndicatorFn>(&payload)) {
    return (t >= ind->lo && t <= ind->hi) ? ind->inside : ind->outside;
  }
  const auto& s = std::get<SamplesFn>(payload);
  if (t <= s.grid.front()) return s.values.front();
  if (t >= s.grid.back()) return s.values.back();
  const auto it = std::upper_bound(s.grid.begin(), s.grid.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - s.grid.begin());
  const double x0 = s.grid[j - 1], x1 = s.grid[j];
  const double w = (t - x0) / (x1 - x0);
  return (1.0 - w) * s.values[j - 1] + w * s.values[j];
}

TSFunction TSFunction::constant(const TimeScale& ts, double c) {
  return TSFunction(std::vector<Payload>(ts.component_count(), ConstantFn{c}));
}

TSFunction TSFunction::linear(const TimeScale& ts, double slope, double intercept) {
  return TSFunction(std::vector<Payload>(ts.component_count(), LinearFn{slope, intercept}));
}

TSFunction TSFunction::power(const TimeScale& ts, double center, double exponent,
                             double scale, double offset) {
  return TSFunction(std::vector<Payload>(ts.component_count(),
                                         PowerFn{center, exponent, scale, offset}));
}

TSFunction TSFunction::indicator(const TimeScale& ts, double lo, double hi) {
  return TSFunction(std::vector<Payload>(ts.component_count(), IndicatorFn{lo, hi}));
}

TSFunction TSFunction::from_payloads(const TimeScale& ts, std::vector<Payload> payloads) {
  validate_against(ts, payloads);
  return TSFunction(std::move(payloads));
}

double TSFunction::eval_component(std::size_t comp, double t) const {
  return eval_payload(payloads_.at(comp), t);
}

namespace {

// Stable |a + r|^g - |a|^g; r is carried exactly so no precision is lost
// when |r| is far below the rounding scale of a.
double power_difference(double a, double r, double g) {
  const double b = a + r;
  if (a == 0 || b == 0 || (a > 0) != (b > 0)) {
    return std::pow(std::abs(b), g) - std::pow(std::abs(a), g);
  }
  const double base = std::pow(std::abs(a), g);
  return base * std::expm1(g * std::log1p(r / a));
}

}  // namespace

double TSFunction::increment(std::size_t comp, double s, double r) const {
  const Payload& p = payloads_.at(comp);
  if (std::get_if<ConstantFn>(&p)) return 0.0;
  if (const auto* l = std::get_if<LinearFn>(&p)) return l->slope * r;
  if (const auto* pw = std::get_if<PowerFn>(&p)) {
    const double a = s - pw->center;
    if ((a == 0 || a + r == 0) && pw->exponent < 0) {
      fail(ErrorCode::SingularEvaluation,
           "power payload increment touches its singular point");
    }
    return pw->scale * power_difference(a, r, pw->exponent);
  }
  if (const auto* ind = std::get_if<IndicatorFn>(&p)) {
    const bool in0 = s >= ind->lo && s <= ind->hi;
    const bool in1 = s + r >= ind->lo && s + r <= ind->hi;
    if (in0 == in1) return 0.0;
    return in1 ? ind->inside - ind->outside : ind->outside - ind->inside;
  }
  const auto& sm = std::get<SamplesFn>(p);
  const auto& grid = sm.grid;
  const auto& vals = sm.values;
  auto segment_of = [&](double t) -> std::size_t {
    if (t <= grid.front()) return 0;
    if (t >= grid.back()) return grid.size() - 2;
    return static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), t) -
                                    grid.begin()) - 1;
  };
  auto slope_at = [&](std::size_t j) {
    return (vals[j + 1] - vals[j]) / (grid[j + 1] - grid[j]);
  };
  auto clamp_pos = [&](double t) { return std::clamp(t, grid.front(), grid.back()); };
  const double t0 = clamp_pos(s), t1 = clamp_pos(s + r);
  const std::size_t j0 = segment_of(t0), j1 = segment_of(t1);
  if (j0 == j1) {
    // Within one linear segment the increment is slope * r; use r itself
    // (t1 - t0 would re-round it away) unless an end was clamped.
    if (t0 == s && t1 == s + r) {
      const bool unclamped = s >= grid.front() && s + r >= grid.front() &&
                             s <= grid.back() && s + r <= grid.back();
      if (unclamped) return slope_at(j0) * r;
    }
    return slope_at(j0) * (t1 - t0);
  }
  // Segments crossed: local pieces at the ends, knot-value jumps in between.
  if (j1 > j0) {
    double inc = slope_at(j0) * (grid[j0 + 1] - t0) + slope_at(j1) * (t1 - grid[j1]);
    inc += vals[j1] - vals[j0 + 1];
    return inc;
  }
  double inc = slope_at(j0) * (grid[j0] - t0) + slope_at(j1) * (t1 - grid[j1 + 1]);
  inc += vals[j1 + 1] - vals[j0];
  return inc;
}

double TSFunction::eval(const TimeScale& ts, double t) const {
  const int comp = ts.component_of(t);
  if (comp < 0) {
    std::ostringstream oss;
    oss << "t=" << t << " is not in the time scale";
    fail(ErrorCode::DomainError, oss.str());
  }
  return eval_component(static_cast<std::size_t>(comp), t);
}

double TSFunction::atom_value(const TimeScale& ts, std::size_t comp) const {
  const Component& c = ts.components().at(comp);
  if (!c.is_atom()) fail(ErrorCode::DomainError, "component is not an atom");
  return eval_component(comp, c.position());
}

TSFunction TSFunction::affine(double scale, double shift) const {
  std::vector<Payload> out;
  out.reserve(payloads_.size());
  for (const Payload& p : payloads_) {
    if (const auto* c = std::get_if<ConstantFn>(&p)) {
      out.push_back(ConstantFn{scale * c->value + shift});
    } else if (const auto* l = std::get_if<LinearFn>(&p)) {
      out.push_back(LinearFn{scale * l->slope, scale * l->intercept + shift});
    } else if (const auto* pw = std::get_if<PowerFn>(&p)) {
      out.push_back(PowerFn{pw->center, pw->exponent, scale * pw->scale,
                            scale * pw->offset + shift});
    } else if (const auto* ind = std::get_if<IndicatorFn>(&p)) {
      out.push_back(IndicatorFn{ind->lo, ind->hi, scale * ind->inside + shift,
                                scale * ind->outside + shift});
    } else {
      const auto& s = std::get<SamplesFn>(p);
      SamplesFn t = s;
      for (double& v : t.values) v = scale * v + shift;
      out.push_back(std::move(t));
    }
  }
  return TSFunction(std::move(out));
}

TSFunction TSFunction::add(const TSFunction& u, const TSFunction& v) {
  if (u.payloads_.size() != v.payloads_.size()) {
    fail(ErrorCode::DomainError, "cannot add functions on different scales");
  }
  std::vector<Payload> out;
  out.reserve(u.payloads_.size());
  for (std::size_t i = 0; i < u.payloads_.size(); ++i) {
    const Payload& a = u.payloads_[i];
    const Payload& b = v.payloads_[i];
    if (const auto* ca = std::get_if<ConstantFn>(&a)) {
      if (const auto* cb = std::get_if<ConstantFn>(&b)) {
        out.push_back(ConstantFn{ca->value + cb->value});
        continue;
      }
      TSFunction shifted = TSFunction({b}).affine(1.0, ca->value);
      out.push_back(shifted.payloads_[0]);
      continue;
    }
    if (const auto* cb = std::get_if<ConstantFn>(&b)) {
      TSFunction shifted = TSFunction({a}).affine(1.0, cb->value);
      out.push_back(shifted.payloads_[0]);
      continue;
    }
    if (const auto* la = std::get_if<LinearFn>(&a)) {
      if (const auto* lb = std::get_if<LinearFn>(&b)) {
        out.push_back(LinearFn{la->slope + lb->slope, la->intercept + lb->intercept});
        continue;
      }
    }
    if (const auto* sa = std::get_if<SamplesFn>(&a)) {
      if (const auto* sb = std::get_if<SamplesFn>(&b)) {
        if (sa->grid == sb->grid) {
          SamplesFn sum = *sa;
          for (std::size_t j = 0; j < sum.values.size(); ++j) {
            sum.values[j] += sb->values[j];
          }
          out.push_back(std::move(sum));
          continue;
        }
        // Different knot sets: resample both on the union grid (exact for
        // piecewise-linear payloads).
        SamplesFn sum;
        sum.grid = sa->grid;
        sum.grid.insert(sum.grid.end(), sb->grid.begin(), sb->grid.end());
        std::sort(sum.grid.begin(), sum.grid.end());
        sum.grid.erase(std::unique(sum.grid.begin(), sum.grid.end()), sum.grid.end());
        sum.values.reserve(sum.grid.size());
        for (double x : sum.grid) {
          sum.values.push_back(eval_payload(a, x) + eval_payload(b, x));
        }
        out.push_back(std::move(sum));
        continue;
      }
    }
    fail(ErrorCode::DomainError, "payloads are not structurally addable");
  }
  return TSFunction(std::move(out));
}

std::vector<double> TSFunction::breakpoints(std::size_t comp) const {
  std::vector<double> bp;
  const Payload& p = payloads_.at(comp);
  if (const auto* ind = std::get_if<IndicatorFn>(&p)) {
    bp.push_back(ind->lo);
    bp.push_back(ind->hi);
  } else if (const auto* s = std::get_if<SamplesFn>(&p)) {
    bp = s->grid;
  }
  return bp;
}

std::vector<TSFunction::SingularPoint> TSFunction::singularities(std::size_t comp) const {
  std::vector<SingularPoint> out;
  const Payload& p = payloads_.at(comp);
  if (const auto* pw = std::get_if<PowerFn>(&p)) {
    // Non-smooth for any non-integer exponent; only exponent < 0 is singular.
    if (pw->exponent < 0 ||
        pw->exponent != std::floor(pw->exponent)) {
      out.push_back({pw->center, pw->exponent});
    }
  }
  return out;
}

}  // namespace tsgag
