#include "tsgag/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tsgag/integrate.hpp"

namespace tsgag {

namespace {

// Up to four basis functions have a nonzero increment at a point pair.
struct ActiveDiff {
  int idx[4];
  double d[4];
  int n = 0;

  void add(int index, double value) {
    for (int k = 0; k < n; ++k) {
      if (idx[k] == index) {
        d[k] += value;
        return;
      }
    }
    idx[n] = index;
    d[n] = value;
    ++n;
  }
};

// Hat values at t inside an interval block: nodes i and i+1 of cell i.
void add_hats(const Basis::IntervalBlock& blk, double t, double sign, ActiveDiff& out) {
  const double h = blk.h();
  int cell = static_cast<int>(std::floor((t - blk.a) / h));
  cell = std::clamp(cell, 0, blk.cells - 1);
  const double x0 = blk.node(cell);
  const double w1 = (t - x0) / h;
  out.add(blk.first_index + cell, sign * (1.0 - w1));
  out.add(blk.first_index + cell + 1, sign * w1);
}

// 4x4 scratch block for cell-pair recursion (fixed active indices).
struct CellPairBlock {
  double v[4][4] = {};

  void accumulate(const double phi_t[2], const double phi_s[2], double w) {
    const double d[4] = {phi_t[0], phi_t[1], -phi_s[0], -phi_s[1]};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) v[r][c] += w * d[r] * d[c];
    }
  }
  CellPairBlock& operator+=(const CellPairBlock& o) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) v[r][c] += o.v[r][c];
    return *this;
  }
  double max_abs_diff(const CellPairBlock& o) const {
    double m = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m = std::max(m, std::abs(v[r][c] - o.v[r][c]));
    return m;
  }
  double max_abs() const {
    double m = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m = std::max(m, std::abs(v[r][c]));
    return m;
  }
};

class Assembler {
 public:
  Assembler(const Basis& basis, double alpha, const QuadConfig& cfg)
      : basis_(basis), cfg_(cfg), kexp_(1.0 + 2.0 * alpha),
        rule_(gauss_rule(cfg.panel_order)),
        K_(Eigen::MatrixXd::Zero(basis.size, basis.size)),
        panel_(Eigen::MatrixXd::Zero(basis.size, basis.size)) {}

  Eigen::MatrixXd run() {
    for (const auto& blk : basis_.intervals) same_interval_block(blk);
    for (std::size_t i = 0; i < basis_.intervals.size(); ++i) {
      for (std::size_t j = i + 1; j < basis_.intervals.size(); ++j) {
        inter_interval_block(basis_.intervals[i], basis_.intervals[j]);
      }
    }
    for (const auto& ib : basis_.intervals) {
      for (const auto& ab : basis_.atoms) mixed_block(ib, ab);
    }
    atom_atom_block();
    return std::move(K_);
  }

 private:
  // --- same-interval block ---------------------------------------------
  //
  // Distance substitution: 2 \int_0^L r^{-kexp} Psi(r) dr with
  // Psi(r) = \int_a^{b-r} D_i(s+r,s) D_j(s+r,s) ds. For fixed r the
  // s-integrand is piecewise quadratic with kinks at mesh nodes and shifted
  // mesh nodes, so the aligned composite Gauss rule is exact. The r-axis is
  // cut at multiples of h (Psi is polynomial between consecutive multiples)
  // and dyadically graded below h with one extra refinement depth; the
  // remaining tail decays with the exact ratio 2^{-(3-kexp)} per band and is
  // extrapolated entrywise.
  void same_interval_block(const Basis::IntervalBlock& blk) {
    const double h = blk.h();
    const double len = blk.b - blk.a;

    for (int j = 1; j < blk.cells; ++j) {
      const double r0 = j * h, r1 = std::min((j + 1) * h, len);
      const double rm = 0.5 * (r0 + r1);
      r_panel_into_K(blk, r0, rm);
      r_panel_into_K(blk, rm, r1);
    }

    const int depth = cfg_.max_refinement_depth + 1;
    double band_mag = 0;
    for (int k = 0; k <= depth; ++k) {
      const double r_hi = h * std::pow(0.5, k);
      panel_.setZero();
      r_panel(blk, 0.5 * r_hi, r_hi, panel_);
      K_ += panel_;
      band_mag = panel_.cwiseAbs().maxCoeff();
      const double running = K_.cwiseAbs().maxCoeff();
      if (band_mag <= 1e-17 * std::max(running, 1e-300)) break;
    }
    const double rho = std::pow(0.5, 3.0 - kexp_);  // ratio of ∫ r^{2-kexp} bands
    if (band_mag > 0 && rho < 1.0) {
      K_ += panel_ * (rho / (1.0 - rho));
    }
  }

  void r_panel_into_K(const Basis::IntervalBlock& blk, double r_lo, double r_hi) {
    r_panel(blk, r_lo, r_hi, K_);
  }

  void r_panel(const Basis::IntervalBlock& blk, double r_lo, double r_hi,
               Eigen::MatrixXd& target) {
    const double mid = 0.5 * (r_lo + r_hi), hl = 0.5 * (r_hi - r_lo);
    for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
      const double r = mid + hl * rule_.nodes[q];
      const double w_r = 2.0 * rule_.weights[q] * hl * std::pow(r, -kexp_);
      s_pass(blk, r, w_r, target);
    }
  }

  void s_pass(const Basis::IntervalBlock& blk, double r, double w_r,
              Eigen::MatrixXd& target) {
    const double a = blk.a, b = blk.b;
    if (r >= b - a) return;
    std::vector<double>& cuts = scratch_;
    cuts.clear();
    cuts.push_back(a);
    cuts.push_back(b - r);
    for (int i = 1; i <= blk.cells; ++i) {
      const double x = blk.node(i);
      if (x > a && x < b - r) cuts.push_back(x);
      const double xs = x - r;
      if (xs > a && xs < b - r) cuts.push_back(xs);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
      const double lo = cuts[seg], hi = cuts[seg + 1];
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
      for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
        const double s = mid + hl * rule_.nodes[q];
        ActiveDiff ad;
        add_hats(blk, s + r, +1.0, ad);
        add_hats(blk, s, -1.0, ad);
        const double w = w_r * rule_.weights[q] * hl;
        for (int rr = 0; rr < ad.n; ++rr) {
          for (int cc = 0; cc < ad.n; ++cc) {
            target(ad.idx[rr], ad.idx[cc]) += w * ad.d[rr] * ad.d[cc];
          }
        }
      }
    }
  }

  // --- distinct-interval block ------------------------------------------
  // Kernel bounded below distance delta0; adaptive tensor refinement per
  // cell pair, polynomial part exact on every sub-rectangle.
  void inter_interval_block(const Basis::IntervalBlock& bi,
                            const Basis::IntervalBlock& bj) {
    for (int ci = 0; ci < bi.cells; ++ci) {
      for (int cj = 0; cj < bj.cells; ++cj) {
        CellPairBlock acc;
        cell_pair_adaptive(bi, ci, bi.node(ci), bi.node(ci + 1), bj, cj,
                           bj.node(cj), bj.node(cj + 1), 0, acc);
        const int idx[4] = {bi.first_index + ci, bi.first_index + ci + 1,
                            bj.first_index + cj, bj.first_index + cj + 1};
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) K_(idx[r], idx[c]) += acc.v[r][c];
        }
      }
    }
  }

  void tensor_panel(const Basis::IntervalBlock& bi, int ci, double t0, double t1,
                    const Basis::IntervalBlock& bj, int cj, double s0, double s1,
                    CellPairBlock& acc) {
    const double tm = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
    const double sm = 0.5 * (s0 + s1), sh = 0.5 * (s1 - s0);
    const double hi_ = bi.h(), hj_ = bj.h();
    for (std::size_t qi = 0; qi < rule_.nodes.size(); ++qi) {
      const double t = tm + th * rule_.nodes[qi];
      const double wt = (t - bi.node(ci)) / hi_;
      const double phi_t[2] = {1.0 - wt, wt};
      for (std::size_t qj = 0; qj < rule_.nodes.size(); ++qj) {
        const double s = sm + sh * rule_.nodes[qj];
        const double ws = (s - bj.node(cj)) / hj_;
        const double phi_s[2] = {1.0 - ws, ws};
        const double w = 2.0 * rule_.weights[qi] * th * rule_.weights[qj] * sh *
                         std::pow(std::abs(t - s), -kexp_);
        acc.accumulate(phi_t, phi_s, w);
      }
    }
  }

  void cell_pair_adaptive(const Basis::IntervalBlock& bi, int ci, double t0,
                          double t1, const Basis::IntervalBlock& bj, int cj,
                          double s0, double s1, int depth, CellPairBlock& out) {
    CellPairBlock whole;
    tensor_panel(bi, ci, t0, t1, bj, cj, s0, s1, whole);
    CellPairBlock parts;
    const double tm = 0.5 * (t0 + t1), sm = 0.5 * (s0 + s1);
    tensor_panel(bi, ci, t0, tm, bj, cj, s0, sm, parts);
    tensor_panel(bi, ci, tm, t1, bj, cj, s0, sm, parts);
    tensor_panel(bi, ci, t0, tm, bj, cj, sm, s1, parts);
    tensor_panel(bi, ci, tm, t1, bj, cj, sm, s1, parts);

    const double err = whole.max_abs_diff(parts);
    const double scale = std::max(parts.max_abs(), 1e-300);
    if (err <= std::max(cfg_.abs_tol * 1e-2, scale * cfg_.rel_tol * 0.1) || depth >= 10) {
      out += parts;
      return;
    }
    cell_pair_adaptive(bi, ci, t0, tm, bj, cj, s0, sm, depth + 1, out);
    cell_pair_adaptive(bi, ci, tm, t1, bj, cj, s0, sm, depth + 1, out);
    cell_pair_adaptive(bi, ci, t0, tm, bj, cj, sm, s1, depth + 1, out);
    cell_pair_adaptive(bi, ci, tm, t1, bj, cj, sm, s1, depth + 1, out);
  }

  // --- interval x atom block ---------------------------------------------
  void mixed_block(const Basis::IntervalBlock& ib, const Basis::AtomBlock& ab) {
    for (int c = 0; c < ib.cells; ++c) {
      const double x0 = ib.node(c), x1 = ib.node(c + 1);
      // Two sub-panels per cell; kernel is smooth here and the hat part is
      // integrated exactly, so this is already past tolerance.
      mixed_panel(ib, ab, x0, 0.5 * (x0 + x1));
      mixed_panel(ib, ab, 0.5 * (x0 + x1), x1);
    }
  }

  void mixed_panel(const Basis::IntervalBlock& ib, const Basis::AtomBlock& ab,
                   double lo, double hi) {
    const double mid = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
      const double t = mid + hl * rule_.nodes[q];
      ActiveDiff ad;
      add_hats(ib, t, +1.0, ad);
      ad.add(ab.index, -1.0);
      const double w = 2.0 * ab.weight * rule_.weights[q] * hl *
                       std::pow(std::abs(t - ab.position), -kexp_);
      for (int rr = 0; rr < ad.n; ++rr) {
        for (int cc = 0; cc < ad.n; ++cc) {
          K_(ad.idx[rr], ad.idx[cc]) += w * ad.d[rr] * ad.d[cc];
        }
      }
    }
  }

  void atom_atom_block() {
    for (std::size_t i = 0; i < basis_.atoms.size(); ++i) {
      for (std::size_t j = 0; j < basis_.atoms.size(); ++j) {
        if (i == j) continue;
        const auto& ai = basis_.atoms[i];
        const auto& aj = basis_.atoms[j];
        const double w = ai.weight * aj.weight *
                         std::pow(std::abs(ai.position - aj.position), -kexp_);
        K_(ai.index, ai.index) += w;
        K_(aj.index, aj.index) += w;
        K_(ai.index, aj.index) -= w;
        K_(aj.index, ai.index) -= w;
      }
    }
  }

  const Basis& basis_;
  const QuadConfig& cfg_;
  double kexp_;
  const GaussRule& rule_;
  Eigen::MatrixXd K_;
  Eigen::MatrixXd panel_;
  std::vector<double> scratch_;
};

}  // namespace

Basis build_basis(const TimeScale& ts, const std::vector<int>& cells_per_interval) {
  std::vector<int> cells = cells_per_interval;
  if (cells.empty()) cells.assign(ts.interval_count(), 64);
  if (cells.size() == 1 && ts.interval_count() > 1) {
    cells.assign(ts.interval_count(), cells[0]);
  }
  if (cells.size() != ts.interval_count()) {
    fail(ErrorCode::DomainError, "cells_per_interval size must match interval count");
  }
  for (int n : cells) {
    if (n < 1) fail(ErrorCode::MeshTooCoarse, "each interval needs >= 1 cell");
  }

  Basis basis;
  int next = 0;
  std::size_t iv = 0;
  for (std::size_t c = 0; c < ts.component_count(); ++c) {
    const Component& comp = ts.components()[c];
    if (comp.is_interval()) {
      Basis::IntervalBlock blk;
      blk.component = c;
      blk.a = comp.lo();
      blk.b = comp.hi();
      blk.cells = cells[iv++];
      blk.first_index = next;
      next += blk.cells + 1;
      basis.intervals.push_back(blk);
    } else {
      basis.atoms.push_back({c, comp.position(), comp.weight, next++});
    }
  }
  basis.size = next;

  basis.mean_weights.assign(static_cast<std::size_t>(basis.size), 0.0);
  for (const auto& blk : basis.intervals) {
    const double h = blk.h();
    for (int i = 0; i <= blk.cells; ++i) {
      const bool boundary = (i == 0 || i == blk.cells);
      basis.mean_weights[static_cast<std::size_t>(blk.first_index + i)] +=
          boundary ? 0.5 * h : h;
    }
  }
  for (const auto& ab : basis.atoms) {
    basis.mean_weights[static_cast<std::size_t>(ab.index)] = ab.weight;
  }
  return basis;
}

GalerkinSystem assemble(const TimeScale& ts, const Basis& basis, double alpha,
                        const QuadConfig& cfg) {
  if (!(alpha > 0) || !(alpha < 1)) {
    fail(ErrorCode::DomainError, "alpha must lie in (0,1)");
  }
  cfg.validate();
  (void)ts;

  GalerkinSystem sys;
  sys.basis = basis;
  sys.alpha = alpha;
  sys.K = Assembler(basis, alpha, cfg).run();
  // Symmetrize away accumulation-order roundoff.
  sys.K = (0.5 * (sys.K + sys.K.transpose())).eval();

  sys.M = Eigen::MatrixXd::Zero(basis.size, basis.size);
  for (const auto& blk : basis.intervals) {
    const double h = blk.h();
    for (int c = 0; c < blk.cells; ++c) {
      const int i = blk.first_index + c;
      sys.M(i, i) += h / 3.0;
      sys.M(i + 1, i + 1) += h / 3.0;
      sys.M(i, i + 1) += h / 6.0;
      sys.M(i + 1, i) += h / 6.0;
    }
  }
  for (const auto& ab : basis.atoms) sys.M(ab.index, ab.index) += ab.weight;
  return sys;
}

Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n < 2) fail(ErrorCode::NoNonzeroEigenvalue, "subspace is empty");
  const double norm = v.norm();
  if (!(norm > 0)) fail(ErrorCode::SingularMass, "zero constraint vector");
  Eigen::VectorXd w = v / norm;
  w(0) += (w(0) >= 0 ? 1.0 : -1.0);
  const double wn2 = w.squaredNorm();
  Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(n, n) - (2.0 / wn2) * (w * w.transpose());
  return h.rightCols(n - 1);
}

PoincareEigen poincare_eigenvalue(const GalerkinSystem& sys) {
  const Eigen::Index n = sys.K.rows();
  if (n < 2) {
    fail(ErrorCode::NoNonzeroEigenvalue,
         "need at least two basis functions for a spectral gap");
  }
  Eigen::VectorXd m =
      Eigen::Map<const Eigen::VectorXd>(sys.basis.mean_weights.data(), n);
  Eigen::MatrixXd q = orthonormal_complement(m);
  Eigen::MatrixXd a = q.transpose() * sys.K * q;
  Eigen::MatrixXd b = q.transpose() * sys.M * q;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mass_check(b);
  if (mass_check.eigenvalues()(0) <= 0) {
    fail(ErrorCode::SingularMass, "restricted mass matrix is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b);
  const double lambda = ges.eigenvalues()(0);
  const double scale = std::max(1.0, ges.eigenvalues().cwiseAbs().maxCoeff());
  if (!(lambda > 1e-13 * scale)) {
    fail(ErrorCode::NoNonzeroEigenvalue,
         "restricted stiffness has no positive eigenvalue");
  }
  return {lambda, 1.0 / std::sqrt(lambda)};
}

TSFunction basis_expansion(const Basis& basis, const TimeScale& ts,
                           const Eigen::VectorXd& coeffs) {
  std::vector<Payload> payloads(ts.component_count(), ConstantFn{0.0});
  for (const auto& blk : basis.intervals) {
    SamplesFn s;
    s.grid.resize(static_cast<std::size_t>(blk.cells) + 1);
    s.values.resize(static_cast<std::size_t>(blk.cells) + 1);
    for (int i = 0; i <= blk.cells; ++i) {
      s.grid[static_cast<std::size_t>(i)] = blk.node(i);
      s.values[static_cast<std::size_t>(i)] = coeffs(blk.first_index + i);
    }
    payloads[blk.component] = std::move(s);
  }
  for (const auto& ab : basis.atoms) {
    payloads[ab.component] = ConstantFn{coeffs(ab.index)};
  }
  return TSFunction::from_payloads(ts, std::move(payloads));
}

ModelSolution solve_model_problem(const TSFunction& f, const TimeScale& ts,
                                  double alpha,
                                  const std::vector<int>& cells_per_interval,
                                  const QuadConfig& cfg) {
  Basis basis = build_basis(ts, cells_per_interval);
  GalerkinSystem sys = assemble(ts, basis, alpha, cfg);
  const Eigen::Index n = sys.K.rows();

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (const auto& blk : basis.intervals) {
    const double h = blk.h();
    const std::size_t comp = blk.component;
    for (int i = 0; i <= blk.cells; ++i) {
      const double lo = std::max(blk.a, blk.a + (i - 1) * h);
      const double hi = std::min(blk.b, blk.a + (i + 1) * h);
      const double xi = blk.node(i);
      auto integ = [&](double t) {
        const double hat = std::max(0.0, 1.0 - std::abs(t - xi) / h);
        return f.eval_component(comp, t) * hat;
      };
      std::vector<double> bp = f.breakpoints(comp);
      bp.push_back(xi);
      std::vector<GradedPoint> graded;
      for (const auto& sp : f.singularities(comp)) {
        graded.push_back({sp.position, sp.exponent});
      }
      QuadResult r = integrate_interval_auto(integ, lo, hi, bp, graded, cfg, 1.0);
      if (!r.converged) {
        fail(ErrorCode::NonconvergedQuadrature, "load vector entry did not converge");
      }
      b(blk.first_index + i) = r.value;
    }
  }
  for (const auto& ab : basis.atoms) {
    b(ab.index) = ab.weight * f.eval_component(ab.component, ab.position);
  }

  ModelSolution sol{TSFunction{}, Eigen::VectorXd::Zero(n), 0, 0, false};

  // Well-posedness lives on the zero-mean subspace; a nonzero-mean load is
  // projected onto it first.
  Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(basis.mean_weights.data(), n);
  const double load_mean = b.sum();
  const double mean_tol = 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff());
  if (std::abs(load_mean) > mean_tol) {
    b -= (load_mean / ts.total_measure()) * m;
    sol.projected = true;
  }

  Eigen::MatrixXd q = orthonormal_complement(m);
  Eigen::MatrixXd a = q.transpose() * sys.K * q;
  Eigen::VectorXd rhs = q.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    fail(ErrorCode::SingularSystem, "restricted stiffness matrix is singular");
  }
  Eigen::VectorXd y = ldlt.solve(rhs);
  sol.coeffs = q * y;
  sol.residual = (a * y - rhs).norm();
  sol.energy = 0.5 * sol.coeffs.dot(sys.K * sol.coeffs) - b.dot(sol.coeffs);
  sol.u_h = basis_expansion(basis, ts, sol.coeffs);
  return sol;
}

void write_matrix_market(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::DomainError, "cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.rows() * m.cols() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
    }
  }
}

}  // namespace tsgag
