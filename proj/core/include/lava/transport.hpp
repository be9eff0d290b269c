#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "lava/dataset.hpp"
#include "lava/errors.hpp"

namespace lava {

enum class SolverMode { sinkhorn, exact_lp, log_barrier };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

enum class PlanStorage { automatic, always, never };

struct SolverConfig {
  double epsilon = 0.1;   // entropic / barrier strength, cost units
  int max_iters = 10'000;
  double tol = 1e-6;      // marginal residual, L1
  SolverMode mode = SolverMode::sinkhorn;
  PlanStorage plan = PlanStorage::automatic;

  static SolverConfig sinkhorn(double epsilon = 0.1, double tol = 1e-6);
  static SolverConfig exact();
  static SolverConfig barrier(double epsilon = 0.1, double tol = 1e-9);
};

/// Ground cost between two discrete measures. Entries must be finite and
/// non-negative; each measure must sum to 1.
class CostMatrix {
 public:
  CostMatrix(MatrixRM values, Eigen::VectorXd row_measure,
             Eigen::VectorXd col_measure);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  const MatrixRM& values() const { return values_; }
  const Eigen::VectorXd& row_measure() const { return row_measure_; }
  const Eigen::VectorXd& col_measure() const { return col_measure_; }

  double mean() const;

  /// Same costs with both measures replaced (no revalidation of entries).
  CostMatrix with_measures(Eigen::VectorXd row_measure,
                           Eigen::VectorXd col_measure) const;
  /// Transposed costs with swapped measures.
  CostMatrix transposed() const;

 private:
  MatrixRM values_;
  Eigen::VectorXd row_measure_, col_measure_;
};

/// Exact pairwise Euclidean distances (or squared distances) between the rows
/// of a and b, with the supplied measures attached.
CostMatrix euclidean_cost(const MatrixRM& a, const MatrixRM& b,
                          Eigen::VectorXd row_measure,
                          Eigen::VectorXd col_measure, bool squared = false);

/// Uniform-measure convenience overload.
CostMatrix euclidean_cost(const MatrixRM& a, const MatrixRM& b,
                          bool squared = false);

struct TransportSolution {
  std::optional<MatrixRM> plan;   // absent for large instances (storage policy)
  Eigen::VectorXd dual_f;         // row potentials, gauge: dual_g[M-1] == 0
  Eigen::VectorXd dual_g;
  double objective = 0.0;         // <plan, C>, transport cost only
  double residual = 0.0;          // max of row/col L1 marginal errors
  int iterations = 0;
  SolverMode mode = SolverMode::sinkhorn;
  double epsilon = 0.0;
  bool converged = false;
};

/// Dispatches on cfg.mode.
TransportSolution solve(const CostMatrix& cost, const SolverConfig& cfg);

/// Log-domain (max-stabilized) Sinkhorn scaling. Never fails on slow
/// convergence: the result is returned with converged=false and the achieved
/// residual. Resulting plan entries are all strictly positive.
TransportSolution solve_sinkhorn(const CostMatrix& cost,
                                 const SolverConfig& cfg);

/// Network simplex on the bipartite transportation graph. Produces a basic
/// optimal plan (<= N+M-1 nonzeros), exact duals with f_i + g_j <= C_ij
/// everywhere and equality on the support, and the gauge dual_g[M-1] = 0.
TransportSolution solve_exact_lp(const CostMatrix& cost,
                                 const SolverConfig& cfg);

/// Damped Newton on the dual of  min <pi,C> - eps * sum_ij log(pi_ij /
/// (mu_i nu_j))  s.t. marginals. Stationarity C_ij - eps/pi_ij - f_i - g_j = 0
/// holds at every cell; duals converge to the exact-LP duals as eps -> 0 and
/// the transport cost satisfies  LP <= <pi,C> <= LP + eps*N*M.
TransportSolution solve_log_barrier(const CostMatrix& cost,
                                    const SolverConfig& cfg);

}  // namespace lava
