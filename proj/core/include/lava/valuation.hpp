#pragma once

#include <cstdint>
#include <vector>

#include "lava/transport.hpp"

namespace lava {

enum class Side { train, valid };

/// Per-point values derived from dual potentials. The calibrated gradient of
/// train point i is (N/(N-1)) * (f_i - mean(f)): the rate of change of the
/// transport objective when mass delta is added at i and drained uniformly
/// from the other points, keeping total mass one. A point's value is the
/// negated calibrated gradient; ranking_train lists train indices in
/// ascending value order (ties by original index, stable).
struct ValuationReport {
  Eigen::VectorXd calib_grad_train;
  Eigen::VectorXd calib_grad_valid;
  Eigen::VectorXd values_train;
  std::vector<std::size_t> ranking_train;

  // provenance
  SolverMode mode = SolverMode::sinkhorn;
  double epsilon = 0.0;
  double distance = 0.0;
  double residual = 0.0;
  bool degenerate_train = false;  // N = 1: gradient pinned to zero
  bool degenerate_valid = false;  // M = 1
  Eigen::VectorXd masses_train;
  Eigen::VectorXd masses_valid;
};

ValuationReport calibrated_gradients(const TransportSolution& sol);

/// Report with the measures attached (enables predict_delta mass guards).
ValuationReport calibrated_gradients(const TransportSolution& sol,
                                     const Eigen::VectorXd& masses_train,
                                     const Eigen::VectorXd& masses_valid);

/// First-order prediction of the objective change when the point's mass moves
/// by delta_mass along the calibrated (sum-preserving) direction.
double predict_delta(const ValuationReport& report, std::size_t index,
                     Side side, double delta_mass);

struct RadiusResult {
  double negative_fraction = 0.0;  // of the point's mass, in [0, 1]
  double positive_fraction = 0.0;
  int resolves = 0;  // exact-LP re-solves spent
};

/// Bisects the largest perturbation (each direction) for which the calibrated
/// first-order prediction matches a re-solved exact LP within tol_rel.
RadiusResult empirical_radius(const CostMatrix& cost, const SolverConfig& cfg,
                              std::size_t index, Side side, double tol_rel);

struct GapCheck {
  double lhs = 0.0;  // exact-LP calibrated-gradient difference
  double rhs = 0.0;  // barrier difference minus the eps/pi correction
};

/// Difference-of-values identity: lhs from exact-LP duals, rhs from the
/// log-barrier solution at the given epsilon with anchor index j (a column
/// for the train side, a row for the valid side). The two agree whenever the
/// anchor's two cells lie in the exact plan's support and the exact duals are
/// unique.
GapCheck gap_recovery_check(const CostMatrix& cost, double epsilon,
                            std::size_t i, std::size_t k, std::size_t j,
                            Side side);

/// Spearman rank correlation between train-side values from exact-LP duals
/// and from entropic duals at cfg_entropic.epsilon.
double rank_agreement(const CostMatrix& cost, const SolverConfig& cfg_entropic,
                      Eigen::Index size_cap);

/// Dual-uniqueness screen: re-solves with a deterministically sign-flipped
/// 1e-9 cost perturbation and accepts when the duals drift by <= drift_tol.
bool duals_unique(const CostMatrix& cost, double drift_tol = 1e-6,
                  double perturbation = 1e-9);

/// Spearman rank correlation with average ranks for ties.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace lava
