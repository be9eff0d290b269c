#pragma once

#include <cstdint>
#include <vector>

#include "lava/corruption.hpp"
#include "lava/hybrid_cost.hpp"
#include "lava/valuation.hpp"

namespace lava {

/// Recall of truly-bad points among the lowest-value points, per budget:
/// rate(b) = |first b of ranking  ∩  corrupted| / corruption_count.
struct DetectionCurve {
  std::vector<std::size_t> budgets;  // ascending
  std::vector<double> rates;         // non-decreasing, rate(n) == 1
  std::size_t corruption_count = 0;
  std::uint64_t seed = 0;
  std::string config_echo;
};

DetectionCurve detection_curve(const ValuationReport& report,
                               const CorruptionRecord& record,
                               std::vector<std::size_t> budgets);

/// For each budget b: drop the b lowest-value train points, re-uniformize
/// masses, and recompute the class-wise distance to the validation set.
/// A budget of 0 reports the unmodified distance.
std::vector<double> distance_after_removal(const LabeledDataset& train,
                                           const LabeledDataset& valid,
                                           const ValuationReport& report,
                                           const std::vector<std::size_t>& budgets,
                                           const HybridCostConfig& cfg);

enum class SubsetDirection { best, worst };

/// Top-`keep` (best) or bottom-`keep` (worst) train indices by value,
/// returned sorted ascending by index.
std::vector<std::size_t> select_subset(const ValuationReport& report,
                                       std::size_t keep,
                                       SubsetDirection direction);

/// Isotropic Gaussian blobs: V classes in d dimensions with configurable
/// mean separation, the desk-scale stand-in for embedded image features.
struct BlobParams {
  int classes = 10;
  Eigen::Index dim = 16;
  std::size_t points = 1000;
  double separation = 6.0;
  double sigma = 1.0;
  std::size_t valid_points = 0;  // validation draw size; 0 = same as points
};

LabeledDataset make_gaussian_blobs(const BlobParams& params,
                                   std::uint64_t seed);

/// Distance-vs-mislabel-fraction sweep: rows are seeds, columns fractions.
struct MonotonicityResult {
  std::vector<double> fractions;
  std::vector<std::uint64_t> seeds;
  MatrixRM distances;                    // seeds x fractions
  std::vector<bool> strictly_increasing;  // per seed
};

MonotonicityResult monotonicity_experiment(const BlobParams& params,
                                           const std::vector<double>& fractions,
                                           const std::vector<std::uint64_t>& seeds,
                                           const HybridCostConfig& cfg);

/// Ten evenly spaced budgets up to n/2.
std::vector<std::size_t> default_budgets(std::size_t n);

}  // namespace lava
