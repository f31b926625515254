#include "tsgag/gagliardo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsgag {

void SeminormParams::validate() const {
  if (!(alpha > 0) || !(alpha < 1)) {
    std::ostringstream oss;
    oss << "alpha must lie in (0,1), got " << alpha;
    fail(ErrorCode::DomainError, oss.str());
  }
  if (!(p >= 1)) {
    std::ostringstream oss;
    oss << "p must be >= 1, got " << p;
    fail(ErrorCode::DomainError, oss.str());
  }
}

double SeminormParams::kexp(double t, double s) const {
  if (!kernel_exponent) return 1.0 + p * alpha;
  const double hi = std::max(t, s), lo = std::min(t, s);
  return 1.0 + p * kernel_exponent(hi, lo);
}

namespace {

// Spot-check a variable order on a deterministic sample of off-diagonal
// pairs; the theory needs alpha(t,s) uniformly inside (0,1).
void check_variable_order(const SeminormParams& prm, const TimeScale& ts) {
  if (!prm.variable_order()) return;
  const auto& comps = ts.components();
  std::vector<double> probes;
  for (const Component& c : comps) {
    probes.push_back(c.lo());
    probes.push_back(0.5 * (c.lo() + c.hi()));
    probes.push_back(c.hi());
  }
  for (double t : probes) {
    for (double s : probes) {
      if (t == s) continue;
      const double a = prm.kernel_exponent(std::max(t, s), std::min(t, s));
      if (!(a > 1e-9) || !(a < 1.0 - 1e-9)) {
        std::ostringstream oss;
        oss << "variable kernel exponent leaves (0,1): alpha(" << t << "," << s
            << ") = " << a;
        fail(ErrorCode::DomainError, oss.str());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Fixed-geometry composite quadrature.
//
// Every node position below is a function of the component geometry, the
// registered breakpoints/singular points, and the config - never of function
// values. Scaling or translating u therefore reuses the identical node set,
// which is what makes absolute homogeneity and transposition symmetry hold to
// roundoff instead of to quadrature tolerance. Accuracy is reported through
// err_est (a half-resolution comparison), not enforced by value-driven
// refinement.
// ---------------------------------------------------------------------------

int subdivisions_for(const QuadConfig& cfg) {
  const double digits = -std::log10(cfg.rel_tol);
  return std::clamp(static_cast<int>(std::ceil(0.5 * digits)) + 1, 3, 10);
}

std::vector<double> make_cuts(double a, double b, const std::vector<double>& interior) {
  std::vector<double> cuts;
  cuts.push_back(a);
  cuts.push_back(b);
  for (double x : interior) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// Dyadic points approaching `edge` from inside [lo, hi].
void add_edge_grading(std::vector<double>& interior, double lo, double hi, double edge,
                      int levels) {
  const double len = hi - lo;
  for (int k = 1; k <= levels; ++k) {
    const double d = len * std::pow(0.5, k);
    interior.push_back(edge <= lo ? lo + d : hi - d);
  }
}

template <class F>
double composite_over(const F& f, double lo, double hi, int m, const GaussRule& rule) {
  const double w = (hi - lo) / m;
  double total = 0;
  for (int j = 0; j < m; ++j) {
    const double mid = lo + (j + 0.5) * w, hl = 0.5 * w;
    double panel = 0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      panel += rule.weights[q] * f(mid + hl * rule.nodes[q]);
    }
    total += panel * hl;
  }
  return total;
}

template <class F>
double composite_rule(const F& f, const std::vector<double>& cuts, int m,
                      const GaussRule& rule) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += composite_over(f, cuts[i], cuts[i + 1], m, rule);
  }
  return total;
}

// Geometric tail factor from the last few fan/band values; scale-free.
struct RatioTail {
  double tail = 0;
  double err = 0;
  bool growing = false;
};

RatioTail ratio_tail(const std::vector<double>& vals) {
  RatioTail out;
  const std::size_t n = vals.size();
  if (n < 3) return out;
  const double s1 = vals[n - 3], s2 = vals[n - 2], s3 = vals[n - 1];
  if (s1 == 0 || s2 == 0) return out;
  const double r2 = s2 / s1, r3 = s3 / s2;
  if (!(r2 > 0) || !(r3 > 0)) return out;
  const double rbar = 0.5 * (r2 + r3);
  if (rbar >= 0.995) {
    out.growing = rbar >= 1.0;
    out.err = std::abs(s3) * 40.0;
    return out;
  }
  out.tail = s3 * rbar / (1.0 - rbar);
  out.err = std::abs(out.tail) * std::min(1.0, 4.0 * std::abs(r3 - r2) / (1.0 - rbar)) +
            std::abs(s3) * 1e-12;
  return out;
}

// 1-D fixed rule with dyadic fans around interior algebraic singularities.
// The fan below the finest level is extrapolated from the measured decay.
template <class F>
QuadResult fixed_rule_with_fans(const F& f, double a, double b,
                                const std::vector<double>& breakpoints,
                                const std::vector<double>& singular_pts, int m,
                                int fan_levels, const GaussRule& rule) {
  QuadResult out;
  if (!(b > a)) return out;
  std::vector<double> interior = breakpoints;
  for (double c : singular_pts) {
    if (c >= a - (b - a) && c <= b + (b - a)) interior.push_back(c);
  }
  std::vector<double> cuts = make_cuts(a, b, interior);

  auto is_singular = [&](double x) {
    for (double c : singular_pts) {
      if (std::abs(c - x) <= 1e-14 * std::max(1.0, std::abs(x))) return true;
    }
    return false;
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const bool sing_lo = is_singular(lo);
    const bool sing_hi = is_singular(hi);
    if (!sing_lo && !sing_hi) {
      out.value += composite_over(f, lo, hi, m, rule);
      continue;
    }
    // Fan toward the singular end(s): dyadic panels plus measured-ratio tail.
    auto fan_toward = [&](double c, double far) {
      const double len = std::abs(far - c);
      const int side = far > c ? 1 : -1;
      std::vector<double> fans;
      double vsum = 0;
      for (int k = 0; k < fan_levels; ++k) {
        const double r_hi = len * std::pow(0.5, k);
        const double r_lo = 0.5 * r_hi;
        const double x0 = c + side * r_lo, x1 = c + side * r_hi;
        const double v = composite_over(f, std::min(x0, x1), std::max(x0, x1),
                                        std::max(2, m / 2), rule);
        fans.push_back(v);
        vsum += v;
        if (std::abs(v) <= 1e-16 * std::max(1.0, std::abs(vsum))) break;
      }
      RatioTail tail = ratio_tail(fans);
      if (tail.growing) {
        out.converged = false;
        out.err_est = std::numeric_limits<double>::infinity();
      }
      out.value += vsum + tail.tail;
      out.err_est += tail.err;
    };
    if (sing_lo && sing_hi) {
      const double mid = 0.5 * (lo + hi);
      fan_toward(lo, mid);
      fan_toward(hi, mid);
    } else if (sing_lo) {
      fan_toward(lo, hi);
    } else {
      fan_toward(hi, lo);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct BlockContext {
  const TSFunction* u;
  const SeminormParams* prm;
  const TimeScale* ts;
  const QuadConfig* cfg;
  bool transposed;

  double increment_p(double t, double s, std::size_t comp_t, std::size_t comp_s) const {
    const double ut = u->eval_component(comp_t, t);
    const double us = u->eval_component(comp_s, s);
    const double d = transposed ? us - ut : ut - us;
    return std::pow(std::abs(d), prm->p);
  }

  // Same-component increment along distance r; cancellation-free, which the
  // deep diagonal bands need (r far below the rounding scale of s).
  double increment_p_same(std::size_t comp, double s, double r) const {
    const double d = u->increment(comp, s, r);
    return std::pow(std::abs(transposed ? -d : d), prm->p);
  }

  std::vector<double> singular_positions(std::size_t comp) const {
    std::vector<double> out;
    for (const auto& sp : u->singularities(comp)) out.push_back(sp.position);
    return out;
  }
};

// Atom-atom pairs: a finite weighted interaction sum, exact up to rounding.
double dd_block(const BlockContext& bc) {
  const auto& comps = bc.ts->components();
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].is_atom()) atoms.push_back(i);
  }
  double total = 0;
  auto term = [&](std::size_t i, std::size_t j) {
    const Component& ci = comps[i];
    const Component& cj = comps[j];
    const double dist = std::abs(ci.position() - cj.position());
    total += ci.weight * cj.weight *
             bc.increment_p(ci.position(), cj.position(), i, j) *
             std::pow(dist, -bc.prm->kexp(ci.position(), cj.position()));
  };
  if (!bc.transposed) {
    for (std::size_t i : atoms)
      for (std::size_t j : atoms)
        if (i != j) term(i, j);
  } else {
    for (std::size_t j : atoms)
      for (std::size_t i : atoms)
        if (i != j) term(i, j);
  }
  return total;
}

// Interval-atom pair: the kernel is bounded by delta0^{-kexp} on the block;
// panels are graded toward the atom-facing edge. Factor 2 covers both
// orderings (kernel symmetry).
QuadResult mixed_block(const BlockContext& bc, std::size_t interval_comp,
                       std::size_t atom_comp) {
  const Component& iv = bc.ts->components()[interval_comp];
  const Component& at = bc.ts->components()[atom_comp];
  const double d = at.position();
  const double len = iv.measure();
  const double gap = d > iv.hi() ? d - iv.hi() : iv.lo() - d;
  const double facing = d > iv.hi() ? iv.hi() : iv.lo();

  auto f = [&](double t) {
    return bc.increment_p(t, d, interval_comp, atom_comp) *
           std::pow(std::abs(t - d), -bc.prm->kexp(t, d));
  };

  std::vector<double> interior = bc.u->breakpoints(interval_comp);
  const int levels =
      std::clamp(static_cast<int>(std::ceil(std::log2(std::max(len / gap, 1.0)))) + 2,
                 0, 40);
  add_edge_grading(interior, iv.lo(), iv.hi(), facing, levels);

  const int m = subdivisions_for(*bc.cfg);
  const GaussRule& rule = gauss_rule(bc.cfg->panel_order);
  QuadResult fine = fixed_rule_with_fans(f, iv.lo(), iv.hi(), interior,
                                         bc.singular_positions(interval_comp), m,
                                         bc.cfg->max_refinement_depth, rule);
  QuadResult coarse = fixed_rule_with_fans(f, iv.lo(), iv.hi(), interior,
                                           bc.singular_positions(interval_comp),
                                           std::max(2, m / 2),
                                           bc.cfg->max_refinement_depth, rule);
  fine.value *= 2.0 * at.weight;
  fine.err_est = 2.0 * at.weight *
                 (fine.err_est + std::abs(fine.value / (2.0 * at.weight) - coarse.value));
  fine.converged = fine.converged && coarse.converged;
  return fine;
}

// Distinct-interval pair: tensor rule on panels graded toward the facing
// edges; the kernel is bounded there by delta0^{-kexp}.
QuadResult inter_block(const BlockContext& bc, std::size_t comp_a, std::size_t comp_b) {
  const Component& ca = bc.ts->components()[comp_a];
  const Component& cb = bc.ts->components()[comp_b];
  const bool a_left = ca.hi() < cb.lo();
  const double gap = a_left ? cb.lo() - ca.hi() : ca.lo() - cb.hi();

  auto graded_cuts = [&](const Component& c, std::size_t comp, double facing) {
    std::vector<double> interior = bc.u->breakpoints(comp);
    const int levels = std::clamp(
        static_cast<int>(std::ceil(std::log2(std::max(c.measure() / gap, 1.0)))) + 2, 0,
        40);
    add_edge_grading(interior, c.lo(), c.hi(), facing, levels);
    for (double s : bc.singular_positions(comp)) interior.push_back(s);
    return make_cuts(c.lo(), c.hi(), interior);
  };
  const std::vector<double> cuts_a = graded_cuts(ca, comp_a, a_left ? ca.hi() : ca.lo());
  const std::vector<double> cuts_b = graded_cuts(cb, comp_b, a_left ? cb.lo() : cb.hi());

  const GaussRule& rule = gauss_rule(bc.cfg->panel_order);
  auto tensor_value = [&](int m) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts_a.size(); ++i) {
      auto outer = [&](double t) {
        auto inner = [&](double s) {
          return bc.increment_p(t, s, comp_a, comp_b) *
                 std::pow(std::abs(t - s), -bc.prm->kexp(t, s));
        };
        return composite_rule(inner, cuts_b, m, rule);
      };
      total += composite_over(outer, cuts_a[i], cuts_a[i + 1], m, rule);
    }
    return total;
  };

  const int m = subdivisions_for(*bc.cfg);
  QuadResult out;
  out.value = tensor_value(m);
  const double coarse = tensor_value(std::max(2, m / 2));
  out.err_est = std::abs(out.value - coarse);
  out.value *= 2.0;
  out.err_est *= 2.0;
  return out;
}

// Same-interval pair via the distance substitution
//   2 \int_0^L r^{-kexp} Phi(r) dr,  Phi(r) = \int_a^{b-r} |u(s+r)-u(s)|^p ds,
// on dyadic bands graded toward the diagonal r = 0. Monotone growth of the
// running total under refinement is the u-outside-the-space signal; clean
// geometric decay at the cap is extrapolated.
BandLoopResult intra_block(const BlockContext& bc, std::size_t comp) {
  const Component& c = bc.ts->components()[comp];
  const double a = c.lo(), b = c.hi(), length = b - a;
  const std::vector<double> base_bp = bc.u->breakpoints(comp);
  const std::vector<double> sing = bc.singular_positions(comp);
  const bool hoist_kernel = !bc.prm->variable_order();
  const double const_kexp = bc.prm->kexp(b, a);
  const int m = subdivisions_for(*bc.cfg);
  const GaussRule& rule = gauss_rule(bc.cfg->panel_order);

  double inner_err = 0;
  bool inner_ok = true;
  auto phi = [&](double r, int mm) {
    std::vector<double> bp;
    bp.reserve(2 * base_bp.size());
    for (double x : base_bp) {
      bp.push_back(x);
      bp.push_back(x - r);
    }
    std::vector<double> fan_pts;
    for (double cpos : sing) {
      fan_pts.push_back(cpos);
      fan_pts.push_back(cpos - r);
    }
    auto inner = [&](double s) {
      const double inc = bc.increment_p_same(comp, s, r);
      return hoist_kernel ? inc : inc * std::pow(r, -bc.prm->kexp(s + r, s));
    };
    QuadResult res = fixed_rule_with_fans(inner, a, b - r, bp, fan_pts, mm,
                                          bc.cfg->max_refinement_depth, rule);
    inner_err = std::max(inner_err, res.err_est);
    inner_ok = inner_ok && res.converged;
    return res.value;
  };
  auto g = [&](double r, int mm) {
    const double kernel = hoist_kernel ? std::pow(r, -const_kexp) : 1.0;
    return 2.0 * kernel * phi(r, mm);
  };

  // Kink-difference distances: the inner segment structure changes there.
  std::vector<double> kink_positions = base_bp;
  kink_positions.push_back(a);
  kink_positions.push_back(b);
  for (double s : sing) kink_positions.push_back(s);
  std::vector<double> r_cuts;
  for (double x : kink_positions) {
    for (double y : kink_positions) {
      const double d = x - y;
      if (d > 1e-14 * length && d < length) r_cuts.push_back(d);
    }
  }
  std::sort(r_cuts.begin(), r_cuts.end());
  r_cuts.erase(std::unique(r_cuts.begin(), r_cuts.end()), r_cuts.end());

  BandLoopResult out;
  const double eta = bc.cfg->diagonal_cutoff_eta;
  const int depth = std::max(bc.cfg->max_refinement_depth, 15);
  std::vector<double> bands, totals;
  double running = 0;
  bool truncated = false;

  for (int k = 0; k <= depth; ++k) {
    double r_hi = length * std::pow(0.5, k);
    double r_lo = 0.5 * r_hi;
    if (eta > 0) {
      if (r_hi <= eta) {
        truncated = true;
        break;
      }
      if (r_lo < eta) {
        r_lo = eta;
        truncated = true;
      }
    }
    std::vector<double> cuts;
    cuts.push_back(r_lo);
    cuts.push_back(r_hi);
    for (double rc : r_cuts) {
      if (rc > r_lo && rc < r_hi) cuts.push_back(rc);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto band_at = [&](int mm) {
      auto fr = [&](double r) { return g(r, mm); };
      return composite_rule(fr, cuts, mm, rule);
    };
    const double band = band_at(m);
    const double band_coarse = band_at(std::max(2, m / 2));
    out.err_est += std::abs(band - band_coarse);
    bands.push_back(band);
    running += band;
    totals.push_back(running);

    if (!std::isfinite(running) || running > 1e100) {
      out.diverged = true;
      out.value = running;
      return out;
    }
    if (truncated) break;

    // Clear geometric growth: flag early instead of grinding to the cap.
    const std::size_t n = totals.size();
    if (k >= 12 && n >= 4 && totals[n - 4] > 0 && totals[n - 1] > 2.5 * totals[n - 4]) {
      out.diverged = true;
      out.value = running;
      return out;
    }
    // Fast clean decay: the remaining bands are negligible and the measured
    // ratio extrapolates them; ratio comparisons are scale-free.
    if (k >= 20 && n >= 4) {
      const double s1 = bands[n - 3], s2 = bands[n - 2], s3 = bands[n - 1];
      if (s1 != 0 && s2 != 0 && s3 != 0) {
        const double q2 = s2 / s1, q3 = s3 / s2;
        if (q2 > 0 && q3 > 0 && q2 < 0.3 && q3 < 0.3) break;
      }
      if (s1 == 0 && s2 == 0 && s3 == 0) break;
    }
  }

  out.value = running;
  out.err_est += inner_err * length;
  out.converged = inner_ok;
  if (truncated) return out;

  const std::size_t n = totals.size();
  if (n >= 4 && totals[n - 4] > 0 && totals[n - 1] > 1.05 * totals[n - 4] &&
      static_cast<int>(n) > depth) {
    // Depth budget exhausted with the running total still growing: the
    // contract's divergence verdict.
    out.diverged = true;
    return out;
  }

  RatioTail tail = ratio_tail(bands);
  if (tail.growing && static_cast<int>(n) > depth) {
    out.diverged = true;
    return out;
  }
  out.value += tail.tail;
  out.err_est += tail.err;
  return out;
}

}  // namespace

SeminormResult seminorm(const TSFunction& u, const SeminormParams& prm,
                        const TimeScale& ts, const QuadConfig& cfg,
                        bool transposed) {
  prm.validate();
  cfg.validate();
  check_variable_order(prm, ts);
  if (u.component_count() != ts.component_count()) {
    fail(ErrorCode::DomainError, "function/scale component mismatch");
  }

  BlockContext bc{&u, &prm, &ts, &cfg, transposed};
  SeminormResult res;
  const auto& comps = ts.components();

  // Fixed block order: cc (intra per interval, then inter pairs), dd, mixed.
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!comps[i].is_interval()) continue;
    BandLoopResult r = intra_block(bc, i);
    res.cc.intra += r.value;
    res.err_est += r.err_est;
    if (r.diverged) res.diverged = true;
    if (!r.converged && !r.diverged) {
      fail(ErrorCode::NonconvergedQuadrature,
           "same-interval block did not converge");
    }
  }
  for (std::size_t i = 0; i < comps.size() && !res.diverged; ++i) {
    if (!comps[i].is_interval()) continue;
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      if (!comps[j].is_interval()) continue;
      QuadResult r = inter_block(bc, i, j);
      if (!r.converged) {
        fail(ErrorCode::NonconvergedQuadrature, "inter-interval block did not converge");
      }
      res.cc.inter += r.value;
      res.err_est += r.err_est;
    }
  }
  if (!res.diverged) {
    res.dd = dd_block(bc);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (!comps[i].is_interval()) continue;
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (!comps[j].is_atom()) continue;
        QuadResult r = mixed_block(bc, i, j);
        if (!r.converged) {
          fail(ErrorCode::NonconvergedQuadrature, "mixed block did not converge");
        }
        res.mixed += r.value;
        res.err_est += r.err_est;
      }
    }
  }

  if (res.diverged) {
    res.value = std::numeric_limits<double>::infinity();
    res.err_est = std::numeric_limits<double>::infinity();
  } else {
    res.value = std::pow(res.total_p(), 1.0 / prm.p);
  }
  return res;
}

double seminorm_oracle(const TSFunction& u, const SeminormParams& prm,
                       const TimeScale& ts, int n) {
  prm.validate();
  if (n < 2) fail(ErrorCode::DomainError, "oracle resolution must be >= 2");
  const auto& comps = ts.components();
  double total = 0;

  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const Component& ci = comps[i];
      const Component& cj = comps[j];
      if (ci.is_atom() && cj.is_atom()) {
        if (i == j) continue;
        const double t = ci.position(), s = cj.position();
        total += ci.weight * cj.weight *
                 std::pow(std::abs(u.eval_component(i, t) - u.eval_component(j, s)),
                          prm.p) *
                 std::pow(std::abs(t - s), -prm.kexp(t, s));
        continue;
      }
      if (ci.is_interval() && cj.is_interval()) {
        const double hi = ci.measure() / n, hj = cj.measure() / n;
        for (int k = 0; k < n; ++k) {
          const double t = ci.lo() + (k + 0.5) * hi;
          const double ut = u.eval_component(i, t);
          for (int l = 0; l < n; ++l) {
            if (i == j && std::abs(k - l) <= 1) continue;  // cells meeting the diagonal
            const double s = cj.lo() + (l + 0.5) * hj;
            total += hi * hj * std::pow(std::abs(ut - u.eval_component(j, s)), prm.p) *
                     std::pow(std::abs(t - s), -prm.kexp(t, s));
          }
        }
        continue;
      }
      // Mixed ordered pair: uniform 1-D rule on the interval side.
      const std::size_t iv = ci.is_interval() ? i : j;
      const std::size_t at = ci.is_interval() ? j : i;
      const Component& civ = comps[iv];
      const Component& cat = comps[at];
      const double h = civ.measure() / n;
      const double d = cat.position();
      const double ud = u.eval_component(at, d);
      double sum = 0;
      for (int k = 0; k < n; ++k) {
        const double t = civ.lo() + (k + 0.5) * h;
        sum += h * std::pow(std::abs(u.eval_component(iv, t) - ud), prm.p) *
               std::pow(std::abs(t - d), -prm.kexp(t, d));
      }
      total += cat.weight * sum;
    }
  }
  return total;
}

double wnorm(const TSFunction& u, const SeminormParams& prm, const TimeScale& ts,
             const QuadConfig& cfg) {
  SeminormResult sn = seminorm(u, prm, ts, cfg);
  if (sn.diverged) {
    fail(ErrorCode::DivergentSeminorm,
         "seminorm is infinite; u lies outside the space");
  }
  return lp_norm(u, prm.p, ts, cfg) + sn.value;
}

}  // namespace tsgag
