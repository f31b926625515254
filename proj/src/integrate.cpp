#include "tsgag/integrate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tsgag {

namespace {

// Tolerance share for one interval component, scaled by its measure.
double component_tol(const TimeScale& ts, const Component& c, const QuadConfig& cfg,
                     double scale_hint) {
  const double share = c.measure() / ts.total_measure();
  return std::max(cfg.abs_tol, cfg.rel_tol * scale_hint) * std::max(share, 1e-3);
}

std::vector<GradedPoint> graded_points_for(const TSFunction& u, std::size_t comp,
                                           double pow_scale) {
  std::vector<GradedPoint> graded;
  for (const auto& sp : u.singularities(comp)) {
    graded.push_back({sp.position, sp.exponent * pow_scale});
  }
  return graded;
}

void check_converged(const QuadResult& r, const char* what) {
  if (!r.converged) {
    std::ostringstream oss;
    oss << what << " did not converge within the refinement budget (err_est "
        << r.err_est << ")";
    fail(ErrorCode::NonconvergedQuadrature, oss.str());
  }
}

}  // namespace

IntegralValue delta_integral(const TSFunction& u, const TimeScale& ts,
                             const QuadConfig& cfg) {
  cfg.validate();
  // Coarse scale pass for relative-tolerance distribution.
  double scale_hint = 0;
  for (std::size_t i = 0; i < ts.component_count(); ++i) {
    const Component& c = ts.components()[i];
    if (c.is_atom()) {
      scale_hint += std::abs(c.weight * u.atom_value(ts, i));
    } else {
      // Off-center probe so a midpoint singularity does not trip it.
      const double probe = c.lo() + 0.6180339887498949 * c.measure();
      try {
        scale_hint += c.measure() * std::abs(u.eval_component(i, probe));
      } catch (const Error&) {
        scale_hint += c.measure();
      }
    }
  }
  scale_hint = std::max(scale_hint, 1.0);

  IntegralValue out;
  for (std::size_t i = 0; i < ts.component_count(); ++i) {
    const Component& c = ts.components()[i];
    if (c.is_atom()) {
      out.value += c.weight * u.atom_value(ts, i);
      continue;
    }
    auto f = [&](double t) { return u.eval_component(i, t); };
    QuadResult r = integrate_interval(f, c.lo(), c.hi(), u.breakpoints(i),
                                      graded_points_for(u, i, 1.0), cfg,
                                      component_tol(ts, c, cfg, scale_hint));
    check_converged(r, "delta integral");
    out.value += r.value;
    out.err_est += r.err_est;
  }
  return out;
}

double lp_norm(const TSFunction& u, double p, const TimeScale& ts,
               const QuadConfig& cfg) {
  if (!(p >= 1)) fail(ErrorCode::DomainError, "lp_norm requires p >= 1");
  cfg.validate();
  double total = 0;
  double scale_hint = std::max(1.0, ts.total_measure());
  for (std::size_t i = 0; i < ts.component_count(); ++i) {
    const Component& c = ts.components()[i];
    if (c.is_atom()) {
      total += c.weight * std::pow(std::abs(u.atom_value(ts, i)), p);
      continue;
    }
    auto f = [&](double t) { return std::pow(std::abs(u.eval_component(i, t)), p); };
    QuadResult r = integrate_interval(f, c.lo(), c.hi(), u.breakpoints(i),
                                      graded_points_for(u, i, p), cfg,
                                      component_tol(ts, c, cfg, scale_hint));
    check_converged(r, "lp_norm integral");
    total += r.value;
  }
  return std::pow(total, 1.0 / p);
}

double average(const TSFunction& u, const TimeScale& ts, const QuadConfig& cfg) {
  return delta_integral(u, ts, cfg).value / ts.total_measure();
}

double component_average(const TSFunction& u, const TimeScale& ts,
                         std::size_t comp, const QuadConfig& cfg) {
  if (comp >= ts.component_count()) {
    fail(ErrorCode::DomainError, "component index out of range");
  }
  const Component& c = ts.components()[comp];
  if (c.is_atom()) return u.atom_value(ts, comp);
  auto f = [&](double t) { return u.eval_component(comp, t); };
  QuadResult r = integrate_interval(f, c.lo(), c.hi(), u.breakpoints(comp),
                                    graded_points_for(u, comp, 1.0), cfg,
                                    std::max(cfg.abs_tol, cfg.rel_tol * c.measure()));
  check_converged(r, "component average integral");
  return r.value / c.measure();
}

WeightedIntegral weighted_power_integral(const TSFunction& v, double p,
                                         double weight_exp, double x0,
                                         const TimeScale& ts,
                                         const QuadConfig& cfg) {
  cfg.validate();
  if (!ts.contains(x0)) fail(ErrorCode::X0NotInT, "weight center x0 must lie in T");
  WeightedIntegral out;
  const int x0_comp = ts.component_of(x0);

  for (std::size_t i = 0; i < ts.component_count(); ++i) {
    const Component& c = ts.components()[i];
    if (c.is_atom()) {
      if (static_cast<int>(i) == x0_comp) {
        // |0|^{-e} is undefined; the atom's own term is dropped and flagged.
        out.atom_excluded = weight_exp > 0;
        if (weight_exp <= 0) {
          out.value += c.weight * std::pow(std::abs(v.atom_value(ts, i)), p);
        }
        continue;
      }
      const double w = std::pow(std::abs(c.position() - x0), -weight_exp);
      out.value += c.weight * w * std::pow(std::abs(v.atom_value(ts, i)), p);
      continue;
    }

    auto f = [&](double t) {
      const double vv = std::pow(std::abs(v.eval_component(i, t)), p);
      return weight_exp == 0 ? vv : vv * std::pow(std::abs(t - x0), -weight_exp);
    };
    std::vector<GradedPoint> graded = graded_points_for(v, i, p);
    const bool x0_in_comp = x0 >= c.lo() && x0 <= c.hi();
    if (x0_in_comp && weight_exp > 0) {
      graded.push_back({x0, -weight_exp});
    }
    QuadResult r = integrate_interval_auto(f, c.lo(), c.hi(), v.breakpoints(i),
                                           graded, cfg, 1.0);
    if (!r.converged) {
      if (std::isinf(r.err_est) && x0_in_comp && weight_exp >= 1) {
        // Critical/supercritical weight: the integral itself is infinite.
        out.diverged = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
      check_converged(r, "weighted integral");
    }
    out.value += r.value;
    out.err_est += r.err_est;
  }
  return out;
}

}  // namespace tsgag
