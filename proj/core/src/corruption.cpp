#include "lava/corruption.hpp"

#include <algorithm>
#include <cmath>

#include "lava/rng.hpp"

namespace lava {
namespace {

std::vector<std::size_t> pick_fraction(const LabeledDataset& ds,
                                       double fraction, Rng& rng) {
  require(fraction > 0.0 && fraction <= 1.0, errc::invalid_argument,
          "fraction must lie in (0, 1]");
  // Exactly round(fraction*n) rows, which may be zero on tiny datasets.
  const auto n = static_cast<std::size_t>(ds.n());
  const auto count =
      static_cast<std::size_t>(std::llround(fraction * double(n)));
  auto chosen = rng.sample_without_replacement(n, count);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

std::string to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::mislabel:
      return "mislabel";
    case CorruptionKind::feature_noise:
      return "feature_noise";
    case CorruptionKind::backdoor_trigger:
      return "backdoor_trigger";
    case CorruptionKind::feature_collision:
      return "feature_collision";
    case CorruptionKind::irrelevant_injection:
      return "irrelevant_injection";
  }
  return "unknown";
}

CorruptionKind corruption_kind_from_string(const std::string& name) {
  if (name == "mislabel") return CorruptionKind::mislabel;
  if (name == "feature_noise") return CorruptionKind::feature_noise;
  if (name == "backdoor_trigger") return CorruptionKind::backdoor_trigger;
  if (name == "feature_collision") return CorruptionKind::feature_collision;
  if (name == "irrelevant_injection") {
    return CorruptionKind::irrelevant_injection;
  }
  fail(errc::invalid_argument, "unknown corruption kind: " + name);
}

CorruptionResult mislabel(const LabeledDataset& ds, double fraction,
                          std::uint64_t seed) {
  require(ds.label_universe() >= 2, errc::single_class_dataset,
          "mislabel needs at least two label classes");
  Rng rng(seed);
  const auto chosen = pick_fraction(ds, fraction, rng);

  std::vector<int> labels = ds.labels();
  const int universe = ds.label_universe();
  for (const std::size_t row : chosen) {
    // Uniform over the other V-1 labels.
    const int draw = int(rng.next_below(std::uint64_t(universe - 1)));
    const int original = labels[row];
    labels[row] = draw >= original ? draw + 1 : draw;
  }

  CorruptionRecord record;
  record.kind = CorruptionKind::mislabel;
  record.params = {{"fraction", fraction}};
  record.seed = seed;
  record.corrupted_indices = chosen;
  return {LabeledDataset(ds.features(), std::move(labels), ds.masses(),
                         ds.label_universe()),
          std::move(record)};
}

CorruptionResult feature_noise(const LabeledDataset& ds, double fraction,
                               double sigma_scale, std::uint64_t seed) {
  require(sigma_scale >= 0.0, errc::invalid_argument,
          "sigma_scale must be non-negative");
  Rng rng(seed);
  const auto chosen = pick_fraction(ds, fraction, rng);

  // Per-column population std of the clean data sets the noise amplitude.
  const Eigen::Index d = ds.dim();
  Eigen::VectorXd sigma(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double mean = ds.features().col(c).mean();
    const double var =
        (ds.features().col(c).array() - mean).square().sum() / double(ds.n());
    sigma[c] = sigma_scale * std::sqrt(var);
  }

  MatrixRM features = ds.features();
  for (const std::size_t row : chosen) {
    for (Eigen::Index c = 0; c < d; ++c) {
      features(Eigen::Index(row), c) += sigma[c] * rng.next_gaussian();
    }
  }

  CorruptionRecord record;
  record.kind = CorruptionKind::feature_noise;
  record.params = {{"fraction", fraction}, {"sigma_scale", sigma_scale}};
  record.seed = seed;
  record.corrupted_indices = chosen;
  return {LabeledDataset(std::move(features), ds.labels(), ds.masses(),
                         ds.label_universe()),
          std::move(record)};
}

CorruptionResult backdoor_trigger(const LabeledDataset& ds, double fraction,
                                  int target_label,
                                  const std::vector<Eigen::Index>& patch_coords,
                                  double patch_value, std::uint64_t seed) {
  require(target_label >= 0 && target_label < ds.label_universe(),
          errc::invalid_argument, "target label outside the universe");
  for (const Eigen::Index coord : patch_coords) {
    require(coord >= 0 && coord < ds.dim(), errc::bad_patch_coord,
            "patch coordinate " + std::to_string(coord) +
                " outside [0, d)");
  }
  require(std::isfinite(patch_value), errc::invalid_argument,
          "patch value must be finite");
  Rng rng(seed);
  const auto chosen = pick_fraction(ds, fraction, rng);

  MatrixRM features = ds.features();
  std::vector<int> labels = ds.labels();
  for (const std::size_t row : chosen) {
    for (const Eigen::Index coord : patch_coords) {
      features(Eigen::Index(row), coord) = patch_value;
    }
    labels[row] = target_label;
  }

  CorruptionRecord record;
  record.kind = CorruptionKind::backdoor_trigger;
  record.params = {{"fraction", fraction},
                   {"target_label", target_label},
                   {"patch_coords", patch_coords},
                   {"patch_value", patch_value}};
  record.seed = seed;
  record.corrupted_indices = chosen;
  return {LabeledDataset(std::move(features), std::move(labels), ds.masses(),
                         ds.label_universe()),
          std::move(record)};
}

CorruptionResult feature_collision(const LabeledDataset& ds, std::size_t count,
                                   int base_label,
                                   const Eigen::VectorXd& blend_source,
                                   double alpha, std::uint64_t seed) {
  require(alpha > 0.0 && alpha < 1.0, errc::invalid_argument,
          "alpha must lie in (0, 1)");
  require(blend_source.size() == ds.dim(), errc::dimension_mismatch,
          "blend source dimension mismatch");
  std::vector<std::size_t> base_rows;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    if (ds.labels()[i] == base_label) {
      base_rows.push_back(std::size_t(i));
    }
  }
  require(base_rows.size() >= count, errc::not_enough_base_rows,
          "only " + std::to_string(base_rows.size()) + " rows carry label " +
              std::to_string(base_label) + ", need " + std::to_string(count));

  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(base_rows.size(), count);
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (const std::size_t p : picks) chosen.push_back(base_rows[p]);
  std::sort(chosen.begin(), chosen.end());

  MatrixRM features = ds.features();
  for (const std::size_t row : chosen) {
    for (Eigen::Index c = 0; c < ds.dim(); ++c) {
      features(Eigen::Index(row), c) =
          (1.0 - alpha) * features(Eigen::Index(row), c) +
          alpha * blend_source[c];
    }
  }

  CorruptionRecord record;
  record.kind = CorruptionKind::feature_collision;
  record.params = {{"count", count},
                   {"base_label", base_label},
                   {"alpha", alpha},
                   {"blend_source",
                    std::vector<double>(blend_source.data(),
                                        blend_source.data() +
                                            blend_source.size())}};
  record.seed = seed;
  record.corrupted_indices = chosen;
  return {LabeledDataset(std::move(features), ds.labels(), ds.masses(),
                         ds.label_universe()),
          std::move(record)};
}

CorruptionResult irrelevant_injection(
    const LabeledDataset& ds, const LabeledDataset& donor,
    const std::map<int, std::size_t>& per_class_counts, std::uint64_t seed) {
  require(donor.dim() == ds.dim(), errc::dimension_mismatch,
          "donor feature dimension mismatch");
  std::size_t total = 0;
  for (const auto& [label, count] : per_class_counts) {
    require(label >= 0 && label < ds.label_universe(), errc::invalid_argument,
            "receiving label " + std::to_string(label) +
                " outside the universe");
    total += count;
  }
  require(total <= std::size_t(donor.n()), errc::invalid_argument,
          "per-class counts exceed donor size");

  const auto n = std::size_t(ds.n());
  if (total == 0) {
    CorruptionRecord record;
    record.kind = CorruptionKind::irrelevant_injection;
    record.params = {{"per_class_counts", nlohmann::json::object()}};
    record.seed = seed;
    return {ds, std::move(record)};
  }

  Rng rng(seed);
  const auto donor_rows =
      rng.sample_without_replacement(std::size_t(donor.n()), total);

  MatrixRM features(n + total, ds.dim());
  features.topRows(Eigen::Index(n)) = ds.features();
  std::vector<int> labels = ds.labels();
  labels.reserve(n + total);

  nlohmann::json counts_json = nlohmann::json::object();
  std::size_t cursor = 0;
  for (const auto& [label, count] : per_class_counts) {
    counts_json[std::to_string(label)] = count;
    for (std::size_t c = 0; c < count; ++c, ++cursor) {
      features.row(Eigen::Index(n + cursor)) =
          donor.features().row(Eigen::Index(donor_rows[cursor]));
      labels.push_back(label);
    }
  }

  Eigen::VectorXd masses = Eigen::VectorXd::Constant(
      Eigen::Index(n + total), 1.0 / double(n + total));
  std::vector<std::size_t> chosen(total);
  for (std::size_t c = 0; c < total; ++c) chosen[c] = n + c;

  CorruptionRecord record;
  record.kind = CorruptionKind::irrelevant_injection;
  record.params = {{"per_class_counts", counts_json}};
  record.seed = seed;
  record.corrupted_indices = std::move(chosen);
  return {LabeledDataset(std::move(features), std::move(labels),
                         std::move(masses), ds.label_universe()),
          std::move(record)};
}

}  // namespace lava
