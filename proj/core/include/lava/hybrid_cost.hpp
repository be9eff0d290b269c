#pragma once

#include <vector>

#include "lava/dataset.hpp"
#include "lava/transport.hpp"

namespace lava {

/// Rows of one label with masses renormalized to sum 1.
struct ConditionalMeasure {
  int label = 0;
  std::vector<Eigen::Index> indices;  // rows in the source dataset
  MatrixRM features;
  Eigen::VectorXd masses;
};

/// Per-label conditional feature distributions; labels with zero total mass
/// are omitted.
std::vector<ConditionalMeasure> conditional_measures(const LabeledDataset& ds);

enum class MissingLabelPolicy { error, impute_max };

/// OT distances between per-label conditional feature distributions.
/// values(a, b) = W_d(train conditional a, valid conditional b); entries with
/// an absent label on either side are NaN and flagged in the presence masks.
struct LabelDistanceTable {
  MatrixRM values;
  std::vector<bool> present_train;
  std::vector<bool> present_valid;
  bool all_converged = true;

  double max_finite() const;
};

struct HybridCostConfig {
  double c_weight = 1.0;        // label-distance coefficient
  double feature_weight = 1.0;  // feature-distance coefficient (ablation knob)
  SolverConfig inner = SolverConfig::sinkhorn();
  SolverConfig outer = SolverConfig::sinkhorn();
  MissingLabelPolicy missing_policy = MissingLabelPolicy::error;
  bool squared_ground = false;

  /// Exact LP for both levels; used by oracle tests and invariants.
  static HybridCostConfig oracle();
};

LabelDistanceTable label_distance_table(const LabeledDataset& train,
                                        const LabeledDataset& valid,
                                        const SolverConfig& inner,
                                        bool squared_ground = false);

/// C_ij = feature_weight * ||x_i - x'_j|| + c_weight * table[y_i, y'_j],
/// carrying the two datasets' masses.
CostMatrix hybrid_cost(const LabeledDataset& train, const LabeledDataset& valid,
                       const LabelDistanceTable& table,
                       const HybridCostConfig& cfg);

struct DatasetDistanceResult {
  double distance = 0.0;
  TransportSolution solution;
  LabelDistanceTable table;
};

/// conditional_measures -> label_distance_table -> hybrid_cost -> outer solve.
DatasetDistanceResult dataset_distance(const LabeledDataset& train,
                                       const LabeledDataset& valid,
                                       const HybridCostConfig& cfg);

}  // namespace lava
