#pragma once

#include <Eigen/Dense>

#include "tsgag/gagliardo.hpp"

namespace tsgag {

/// Conforming basis: hat functions on a uniform mesh per interval component
/// plus one indicator per atom. Partition of unity on each component.
struct Basis {
  struct IntervalBlock {
    std::size_t component = 0;
    double a = 0, b = 0;
    int cells = 0;
    int first_index = 0;  // hats first_index .. first_index + cells
    double h() const { return (b - a) / cells; }
    double node(int i) const { return a + i * h(); }
  };
  struct AtomBlock {
    std::size_t component = 0;
    double position = 0, weight = 0;
    int index = 0;
  };

  std::vector<IntervalBlock> intervals;
  std::vector<AtomBlock> atoms;
  int size = 0;
  std::vector<double> mean_weights;  // m_i = ∫ φ_i dμ
};

/// cells_per_interval: one entry per interval component (component order), or
/// a single entry broadcast to all. Every count must be >= 1.
Basis build_basis(const TimeScale& ts, const std::vector<int>& cells_per_interval);

/// K_ij = ∬ (φ_i(t)-φ_i(s))(φ_j(t)-φ_j(s)) |t-s|^{-(1+2α)} d(μ⊗μ) over the
/// off-diagonal set; M_ij = ∫ φ_i φ_j dμ (exact closed forms).
struct GalerkinSystem {
  Eigen::MatrixXd K;
  Eigen::MatrixXd M;
  Basis basis;
  double alpha = 0.5;
};
GalerkinSystem assemble(const TimeScale& ts, const Basis& basis, double alpha,
                        const QuadConfig& cfg);

/// Smallest eigenvalue of K v = λ M v restricted to the mean-zero subspace
/// {v : m^T v = 0}; C_P = λ^{-1/2}.
struct PoincareEigen {
  double lambda_min = 0;
  double c_p = 0;
};
PoincareEigen poincare_eigenvalue(const GalerkinSystem& sys);

/// Minimizes E(c) = ½ c^T K c - b^T c on the mean-zero subspace,
/// b_i = ∫ f φ_i dμ. A nonzero-mean f is projected first (flag set).
struct ModelSolution {
  TSFunction u_h;
  Eigen::VectorXd coeffs;
  double residual = 0;
  double energy = 0;
  bool projected = false;
};
ModelSolution solve_model_problem(const TSFunction& f, const TimeScale& ts,
                                  double alpha,
                                  const std::vector<int>& cells_per_interval,
                                  const QuadConfig& cfg);

/// The function Σ c_i φ_i as a TSFunction (samples on interval meshes,
/// constants on atoms) — exact, hats are piecewise linear.
TSFunction basis_expansion(const Basis& basis, const TimeScale& ts,
                           const Eigen::VectorXd& coeffs);

/// Orthonormal basis (columns) of {x : v^T x = 0}.
Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& v);

/// Plain-text export of a dense symmetric matrix in coordinate form
/// (matrix-market-style), for external inspection.
void write_matrix_market(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace tsgag
