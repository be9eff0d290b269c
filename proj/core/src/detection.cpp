#include "lava/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lava/rng.hpp"

namespace lava {

DetectionCurve detection_curve(const ValuationReport& report,
                               const CorruptionRecord& record,
                               std::vector<std::size_t> budgets) {
  const std::size_t n = report.ranking_train.size();
  require(!budgets.empty(), errc::budget_out_of_range, "no budgets given");
  require(std::is_sorted(budgets.begin(), budgets.end()),
          errc::budget_out_of_range, "budgets must be ascending");
  require(budgets.front() >= 1 && budgets.back() <= n,
          errc::budget_out_of_range, "budgets must lie in [1, n]");
  require(!record.corrupted_indices.empty(), errc::invalid_argument,
          "corruption record lists no corrupted points");

  std::vector<char> corrupted(n, false);
  for (const std::size_t index : record.corrupted_indices) {
    require(index < n, errc::invalid_argument,
            "corrupted index outside the dataset");
    corrupted[index] = true;
  }

  DetectionCurve curve;
  curve.budgets = std::move(budgets);
  curve.corruption_count = record.corrupted_indices.size();
  curve.seed = record.seed;
  curve.rates.reserve(curve.budgets.size());

  std::size_t found = 0;
  std::size_t scanned = 0;
  for (const std::size_t budget : curve.budgets) {
    for (; scanned < budget; ++scanned) {
      if (corrupted[report.ranking_train[scanned]]) ++found;
    }
    curve.rates.push_back(double(found) / double(curve.corruption_count));
  }
  return curve;
}

std::vector<double> distance_after_removal(
    const LabeledDataset& train, const LabeledDataset& valid,
    const ValuationReport& report, const std::vector<std::size_t>& budgets,
    const HybridCostConfig& cfg) {
  const std::size_t n = std::size_t(train.n());
  require(std::is_sorted(budgets.begin(), budgets.end()),
          errc::budget_out_of_range, "budgets must be ascending");
  require(budgets.empty() || budgets.back() < n, errc::budget_out_of_range,
          "removal budget must leave at least one point");

  std::vector<double> distances;
  distances.reserve(budgets.size());
  for (const std::size_t budget : budgets) {
    if (budget == 0) {
      distances.push_back(dataset_distance(train, valid, cfg).distance);
      continue;
    }
    std::vector<char> removed(n, false);
    for (std::size_t r = 0; r < budget; ++r) {
      removed[report.ranking_train[r]] = true;
    }
    const std::size_t kept = n - budget;
    MatrixRM features(kept, train.dim());
    std::vector<int> labels(kept);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (removed[i]) continue;
      features.row(Eigen::Index(row)) = train.features().row(Eigen::Index(i));
      labels[row] = train.labels()[i];
      ++row;
    }
    const LabeledDataset remaining = LabeledDataset::with_uniform_masses(
        std::move(features), std::move(labels), train.label_universe());
    distances.push_back(dataset_distance(remaining, valid, cfg).distance);
  }
  return distances;
}

std::vector<std::size_t> select_subset(const ValuationReport& report,
                                       std::size_t keep,
                                       SubsetDirection direction) {
  const std::size_t n = report.ranking_train.size();
  require(keep >= 1 && keep <= n, errc::keep_out_of_range,
          "keep must lie in [1, n]");

  std::vector<std::size_t> picked;
  picked.reserve(keep);
  if (direction == SubsetDirection::worst) {
    picked.assign(report.ranking_train.begin(),
                  report.ranking_train.begin() + std::ptrdiff_t(keep));
  } else {
    // Highest values first, ties to the lowest original index.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return report.values_train[Eigen::Index(a)] >
                              report.values_train[Eigen::Index(b)];
                     });
    picked.assign(order.begin(), order.begin() + std::ptrdiff_t(keep));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

LabeledDataset make_gaussian_blobs(const BlobParams& params,
                                   std::uint64_t seed) {
  require(params.classes >= 1 && params.dim >= 1 && params.points >= 1,
          errc::invalid_argument, "blob parameters must be positive");
  Rng rng(seed);

  // Class means: orthogonal axes when they fit, otherwise seeded random
  // directions scaled to the requested separation.
  MatrixRM means = MatrixRM::Zero(params.classes, params.dim);
  if (params.classes <= params.dim) {
    for (int c = 0; c < params.classes; ++c) {
      means(c, c) = params.separation;
    }
  } else {
    Rng direction_rng = rng.fork(0x6d65616eULL);
    for (int c = 0; c < params.classes; ++c) {
      double norm = 0.0;
      for (Eigen::Index k = 0; k < params.dim; ++k) {
        means(c, k) = direction_rng.next_gaussian();
        norm += means(c, k) * means(c, k);
      }
      means.row(c) *= params.separation / std::sqrt(norm);
    }
  }

  MatrixRM features(params.points, params.dim);
  std::vector<int> labels(params.points);
  for (std::size_t i = 0; i < params.points; ++i) {
    const int label = int(i % std::size_t(params.classes));
    labels[i] = label;
    for (Eigen::Index k = 0; k < params.dim; ++k) {
      features(Eigen::Index(i), k) =
          means(label, k) + params.sigma * rng.next_gaussian();
    }
  }
  return LabeledDataset::with_uniform_masses(std::move(features),
                                             std::move(labels),
                                             params.classes);
}

MonotonicityResult monotonicity_experiment(
    const BlobParams& params, const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, const HybridCostConfig& cfg) {
  require(!fractions.empty() && !seeds.empty(), errc::invalid_argument,
          "monotonicity experiment needs fractions and seeds");
  require(std::is_sorted(fractions.begin(), fractions.end()),
          errc::invalid_argument, "fractions must be ascending");

  MonotonicityResult result;
  result.fractions = fractions;
  result.seeds = seeds;
  result.distances.resize(Eigen::Index(seeds.size()),
                          Eigen::Index(fractions.size()));
  result.strictly_increasing.assign(seeds.size(), true);

  BlobParams valid_params = params;
  if (params.valid_points > 0) valid_params.points = params.valid_points;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Rng seeder(seeds[s]);
    const LabeledDataset train =
        make_gaussian_blobs(params, seeder.fork(1).next_u64());
    const LabeledDataset valid =
        make_gaussian_blobs(valid_params, seeder.fork(2).next_u64());
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
      const double fraction = fractions[fi];
      double distance = 0.0;
      if (fraction <= 0.0) {
        distance = dataset_distance(train, valid, cfg).distance;
      } else {
        const CorruptionResult corrupted =
            mislabel(train, fraction, seeder.fork(3 + fi).next_u64());
        distance = dataset_distance(corrupted.dataset, valid, cfg).distance;
      }
      result.distances(Eigen::Index(s), Eigen::Index(fi)) = distance;
      if (fi > 0 && distance <= result.distances(Eigen::Index(s),
                                                 Eigen::Index(fi - 1))) {
        result.strictly_increasing[s] = false;
      }
    }
  }
  return result;
}

std::vector<std::size_t> default_budgets(std::size_t n) {
  const std::size_t cap = std::max<std::size_t>(1, n / 2);
  std::vector<std::size_t> budgets;
  std::size_t previous = 0;
  for (int step = 1; step <= 10; ++step) {
    const auto budget = std::max<std::size_t>(
        1, std::size_t(std::llround(double(step) * double(cap) / 10.0)));
    if (budget != previous) budgets.push_back(budget);
    previous = budget;
  }
  return budgets;
}

}  // namespace lava
