#include "tsgag/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace tsgag {

void QuadConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) {
    fail(ErrorCode::DomainError, "quadrature tolerances must be positive");
  }
  if (panel_order < 2) fail(ErrorCode::DomainError, "panel_order must be >= 2");
  if (max_refinement_depth < 1) {
    fail(ErrorCode::DomainError, "max_refinement_depth must be >= 1");
  }
  if (diagonal_cutoff_eta < 0) {
    fail(ErrorCode::DomainError, "diagonal_cutoff_eta must be >= 0");
  }
}

const GaussRule& gauss_rule(int order) {
  if (order < 2) fail(ErrorCode::DomainError, "Gauss rule order must be >= 2");
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Newton iteration on Legendre roots, symmetric about 0.
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  auto [pos, inserted] = cache.emplace(order, std::move(rule));
  return pos->second;
}

namespace {

double panel_value(const Integrand& f, double a, double b, const GaussRule& g) {
  const double mid = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  double sum = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sum += g.weights[i] * f(mid + hl * g.nodes[i]);
  }
  return sum * hl;
}

struct AdaptState {
  const Integrand* f = nullptr;
  const GaussRule* rule = nullptr;
  int max_depth = 0;
  long eval_budget = 0;
  double value = 0;
  double err = 0;
  bool converged = true;
};

void adapt_rec(AdaptState& st, double a, double b, double tol, int depth) {
  if (st.eval_budget <= 0) {
    st.converged = false;
    st.value += panel_value(*st.f, a, b, *st.rule);
    return;
  }
  const double whole = panel_value(*st.f, a, b, *st.rule);
  const double mid = 0.5 * (a + b);
  const double halves = panel_value(*st.f, a, mid, *st.rule) +
                        panel_value(*st.f, mid, b, *st.rule);
  st.eval_budget -= 3 * static_cast<long>(st.rule->nodes.size());
  const double err = std::abs(halves - whole);
  if (!std::isfinite(halves)) {
    st.converged = false;
    st.value += halves;
    st.err = std::numeric_limits<double>::infinity();
    return;
  }
  if (err <= tol || depth >= st.max_depth || (b - a) <= 64 * std::abs(mid) * 1e-16) {
    st.value += halves;
    st.err += err;
    if (err > tol && depth >= st.max_depth) st.converged = false;
    return;
  }
  adapt_rec(st, a, mid, 0.5 * tol, depth + 1);
  adapt_rec(st, mid, b, 0.5 * tol, depth + 1);
}

QuadResult adapt_segment(const Integrand& f, double a, double b,
                         const QuadConfig& cfg, double tol_abs, int max_depth) {
  AdaptState st;
  st.f = &f;
  st.rule = &gauss_rule(cfg.panel_order);
  st.max_depth = max_depth;
  st.eval_budget = 4'000'000;
  adapt_rec(st, a, b, tol_abs, 0);
  return {st.value, st.err, st.converged};
}

struct TailInfo {
  double tail = 0;
  double err = 0;
  bool ok = false;
  bool growing = false;
};

// Geometric extrapolation of the remaining band sums from the last ratios.
TailInfo estimate_tail(const std::vector<double>& bands) {
  TailInfo info;
  const std::size_t n = bands.size();
  if (n < 4) return info;
  const double s1 = bands[n - 3], s2 = bands[n - 2], s3 = bands[n - 1];
  const double scale = std::max({std::abs(s1), std::abs(s2), std::abs(s3)});
  if (scale == 0) {
    info.ok = true;
    return info;
  }
  if (s1 == 0 || s2 == 0) return info;
  const double r2 = s2 / s1;
  const double r3 = s3 / s2;
  if (!(r2 > 0) || !(r3 > 0)) return info;  // sign changes: no clean decay
  const double rbar = 0.5 * (r2 + r3);
  if (rbar >= 0.995) {
    info.growing = rbar >= 1.0;
    return info;
  }
  const double spread = std::abs(r3 - r2);
  info.tail = s3 * rbar / (1.0 - rbar);
  info.err = std::abs(info.tail) * std::min(1.0, 4.0 * spread / (1.0 - rbar)) +
             std::abs(s3) * 1e-12;
  info.ok = spread <= 0.5 * (1.0 - rbar);
  return info;
}

// Integration toward an algebraic endpoint singularity at c (side = +1 when
// the singular point is the left end). Dyadic bands plus tail extrapolation.
QuadResult graded_endpoint(const Integrand& f, double c, double far, int side,
                           double exponent, const QuadConfig& cfg,
                           double tol_abs) {
  const double length = std::abs(far - c);
  QuadResult out;
  std::vector<double> bands;
  double running = 0;
  const int depth = cfg.max_refinement_depth;
  int k = 0;
  int negligible_streak = 0;
  for (; k <= depth; ++k) {
    const double r_hi = length * std::pow(0.5, k);
    const double r_lo = 0.5 * r_hi;
    const double x0 = c + side * r_lo;
    const double x1 = c + side * r_hi;
    const double a = std::min(x0, x1), b = std::max(x0, x1);
    if (b - a <= std::abs(c) * 4e-16) break;
    const double coarse = panel_value(f, a, b, gauss_rule(cfg.panel_order));
    const double band_tol =
        std::max(std::abs(coarse) * cfg.rel_tol * 0.25, tol_abs * 0.02);
    QuadResult band = adapt_segment(f, a, b, cfg, band_tol, 16);
    out.err_est += band.err_est;
    if (!band.converged) out.converged = false;
    bands.push_back(band.value);
    running += band.value;
    const double negligible =
        std::max(tol_abs * 0.01, std::abs(running) * cfg.rel_tol * 0.01);
    if (std::abs(band.value) <= negligible) {
      if (++negligible_streak >= 3) {
        ++k;
        break;
      }
    } else {
      negligible_streak = 0;
    }
    if (!std::isfinite(running)) {
      out.converged = false;
      out.value = running;
      out.err_est = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  out.value = running;
  if (bands.empty()) return out;
  TailInfo tail = estimate_tail(bands);
  if (tail.growing || (exponent <= -1 && !tail.ok && std::abs(bands.back()) >
                           std::max(tol_abs, std::abs(running) * cfg.rel_tol))) {
    // Not integrable (or indistinguishable from it at this depth).
    out.converged = false;
    out.err_est = std::numeric_limits<double>::infinity();
    return out;
  }
  if (tail.ok) {
    out.value += tail.tail;
    out.err_est += tail.err;
  } else if (!bands.empty()) {
    // No clean geometric decay: bound the tail pessimistically.
    out.err_est += 20.0 * std::abs(bands.back());
  }
  return out;
}

}  // namespace

QuadResult integrate_interval(const Integrand& f, double a, double b,
                              const std::vector<double>& breakpoints,
                              const std::vector<GradedPoint>& graded,
                              const QuadConfig& cfg, double tol_abs) {
  cfg.validate();
  if (!(b > a)) return {0, 0, true};

  std::vector<double> cuts{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  for (const GradedPoint& gp : graded) {
    if (gp.position > a && gp.position < b) cuts.push_back(gp.position);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) {
                           return std::abs(x - y) <=
                                  1e-15 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
                         }),
             cuts.end());

  auto graded_at = [&](double x) -> const GradedPoint* {
    for (const GradedPoint& gp : graded) {
      if (std::abs(gp.position - x) <=
          1e-14 * std::max(1.0, std::abs(x))) {
        return &gp;
      }
    }
    return nullptr;
  };

  const double total_len = b - a;
  QuadResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    const double seg_tol = std::max(tol_abs * (hi - lo) / total_len, tol_abs * 1e-3);
    const GradedPoint* gl = graded_at(lo);
    const GradedPoint* gr = graded_at(hi);
    QuadResult seg;
    if (gl && gr) {
      const double mid = 0.5 * (lo + hi);
      QuadResult left = graded_endpoint(f, lo, mid, +1, gl->exponent, cfg, 0.5 * seg_tol);
      QuadResult right = graded_endpoint(f, hi, mid, -1, gr->exponent, cfg, 0.5 * seg_tol);
      seg.value = left.value + right.value;
      seg.err_est = left.err_est + right.err_est;
      seg.converged = left.converged && right.converged;
    } else if (gl) {
      seg = graded_endpoint(f, lo, hi, +1, gl->exponent, cfg, seg_tol);
    } else if (gr) {
      seg = graded_endpoint(f, hi, lo, -1, gr->exponent, cfg, seg_tol);
    } else {
      seg = adapt_segment(f, lo, hi, cfg, seg_tol, cfg.max_refinement_depth);
    }
    out.value += seg.value;
    out.err_est += seg.err_est;
    out.converged = out.converged && seg.converged;
  }
  return out;
}

QuadResult integrate_interval_auto(const Integrand& f, double a, double b,
                                   const std::vector<double>& breakpoints,
                                   const std::vector<GradedPoint>& graded,
                                   const QuadConfig& cfg, double rel_mult) {
  cfg.validate();
  if (!(b > a)) return {0, 0, true};
  // Coarse scale: one panel per segment; on a segment with a graded end only
  // the outer half enters (the singular half would swamp the estimate).
  std::vector<double> cuts{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  for (const GradedPoint& gp : graded) {
    if (gp.position > a && gp.position < b) cuts.push_back(gp.position);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto is_graded = [&](double x) {
    for (const GradedPoint& gp : graded) {
      if (std::abs(gp.position - x) <= 1e-14 * std::max(1.0, std::abs(x))) return true;
    }
    return false;
  };
  const GaussRule& rule = gauss_rule(cfg.panel_order);
  double scale = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (is_graded(lo)) lo = 0.5 * (lo + hi);
    if (is_graded(hi)) hi = 0.5 * (cuts[i] + hi);
    if (hi > lo) scale += std::abs(panel_value(f, lo, hi, rule));
  }
  const double tol = std::max(cfg.abs_tol, scale * cfg.rel_tol * rel_mult);
  return integrate_interval(f, a, b, breakpoints, graded, cfg, tol);
}

}  // namespace tsgag
