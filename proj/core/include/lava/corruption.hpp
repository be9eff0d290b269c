#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lava/dataset.hpp"

namespace lava {

enum class CorruptionKind {
  mislabel,
  feature_noise,
  backdoor_trigger,
  feature_collision,
  irrelevant_injection,
};

std::string to_string(CorruptionKind kind);
CorruptionKind corruption_kind_from_string(const std::string& name);

/// Ground truth for detection scoring: which rows were tampered with and how.
/// Re-running a generator with identical inputs reproduces the record
/// bit-for-bit.
struct CorruptionRecord {
  CorruptionKind kind = CorruptionKind::mislabel;
  nlohmann::json params;  // kind-specific parameters
  std::uint64_t seed = 0;
  std::vector<std::size_t> corrupted_indices;  // sorted
};

struct CorruptionResult {
  LabeledDataset dataset;
  CorruptionRecord record;
};

/// Reassigns round(fraction*n) uniformly chosen rows a uniformly random label
/// different from the original. Features and masses untouched.
CorruptionResult mislabel(const LabeledDataset& ds, double fraction,
                          std::uint64_t seed);

/// Adds zero-mean Gaussian noise to the selected rows; per-column standard
/// deviation is sigma_scale times that column's clean std. Labels untouched.
CorruptionResult feature_noise(const LabeledDataset& ds, double fraction,
                               double sigma_scale, std::uint64_t seed);

/// Overwrites the patch coordinates of the selected rows with patch_value and
/// relabels them as target_label.
CorruptionResult backdoor_trigger(const LabeledDataset& ds, double fraction,
                                  int target_label,
                                  const std::vector<Eigen::Index>& patch_coords,
                                  double patch_value, std::uint64_t seed);

/// Blends `count` rows of base_label toward blend_source:
/// x <- (1-alpha)*x + alpha*blend_source. Labels untouched.
CorruptionResult feature_collision(const LabeledDataset& ds, std::size_t count,
                                   int base_label,
                                   const Eigen::VectorXd& blend_source,
                                   double alpha, std::uint64_t seed);

/// Appends donor rows, relabeled per receiving class; masses re-uniformized
/// over the grown dataset. per_class_counts maps receiving label -> count.
CorruptionResult irrelevant_injection(
    const LabeledDataset& ds, const LabeledDataset& donor,
    const std::map<int, std::size_t>& per_class_counts, std::uint64_t seed);

}  // namespace lava
