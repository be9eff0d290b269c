#include "lava/hybrid_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lava/parallel.hpp"

namespace lava {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::vector<ConditionalMeasure> conditional_measures(const LabeledDataset& ds) {
  const int universe = ds.label_universe();
  std::vector<double> label_mass(universe, 0.0);
  std::vector<std::size_t> label_count(universe, 0);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    label_mass[ds.labels()[i]] += ds.masses()[i];
    label_count[ds.labels()[i]] += 1;
  }

  std::vector<ConditionalMeasure> conditionals;
  for (int label = 0; label < universe; ++label) {
    if (label_mass[label] <= 0.0) continue;  // absent or zero-mass label
    ConditionalMeasure cond;
    cond.label = label;
    cond.indices.reserve(label_count[label]);
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      if (ds.labels()[i] == label) cond.indices.push_back(i);
    }
    cond.features.resize(cond.indices.size(), ds.dim());
    cond.masses.resize(cond.indices.size());
    for (std::size_t r = 0; r < cond.indices.size(); ++r) {
      cond.features.row(r) = ds.features().row(cond.indices[r]);
      cond.masses[r] = ds.masses()[cond.indices[r]] / label_mass[label];
    }
    // The renormalized masses must themselves form a probability vector.
    const double drift = cond.masses.sum() - 1.0;
    Eigen::Index widest = 0;
    cond.masses.maxCoeff(&widest);
    cond.masses[widest] -= drift;
    conditionals.push_back(std::move(cond));
  }
  return conditionals;
}

double LabelDistanceTable::max_finite() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (std::isfinite(values(i, j))) best = std::max(best, values(i, j));
    }
  }
  return best;
}

HybridCostConfig HybridCostConfig::oracle() {
  HybridCostConfig cfg;
  cfg.inner = SolverConfig::exact();
  cfg.outer = SolverConfig::exact();
  return cfg;
}

LabelDistanceTable label_distance_table(const LabeledDataset& train,
                                        const LabeledDataset& valid,
                                        const SolverConfig& inner,
                                        bool squared_ground) {
  require(train.dim() == valid.dim(), errc::dimension_mismatch,
          "train/valid feature dimensions differ");
  const auto train_cond = conditional_measures(train);
  const auto valid_cond = conditional_measures(valid);

  LabelDistanceTable table;
  table.values =
      MatrixRM::Constant(train.label_universe(), valid.label_universe(), kNan);
  table.present_train.assign(train.label_universe(), false);
  table.present_valid.assign(valid.label_universe(), false);
  for (const auto& cond : train_cond) table.present_train[cond.label] = true;
  for (const auto& cond : valid_cond) table.present_valid[cond.label] = true;

  // Independent inner solves; distinct output slots keep the parallel loop
  // deterministic for any thread count.
  const Eigen::Index vc_count = Eigen::Index(valid_cond.size());
  const Eigen::Index pairs = Eigen::Index(train_cond.size()) * vc_count;
  std::vector<char> converged(pairs, true);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const auto& tc = train_cond[std::size_t(p / vc_count)];
    const auto& vc = valid_cond[std::size_t(p % vc_count)];
    const CostMatrix ground = euclidean_cost(tc.features, vc.features,
                                             tc.masses, vc.masses,
                                             squared_ground);
    const TransportSolution sol = solve(ground, inner);
    table.values(tc.label, vc.label) = sol.objective;
    converged[p] = sol.converged;
  }
  table.all_converged =
      std::all_of(converged.begin(), converged.end(), [](char c) { return c; });
  return table;
}

CostMatrix hybrid_cost(const LabeledDataset& train, const LabeledDataset& valid,
                       const LabelDistanceTable& table,
                       const HybridCostConfig& cfg) {
  require(train.dim() == valid.dim(), errc::dimension_mismatch,
          "train/valid feature dimensions differ");
  require(cfg.c_weight >= 0.0 && cfg.feature_weight >= 0.0 &&
              cfg.c_weight + cfg.feature_weight > 0.0,
          errc::invalid_argument, "at least one cost weight must be positive");
  require(train.label_universe() <= table.values.rows() &&
              valid.label_universe() <= table.values.cols(),
          errc::dimension_mismatch, "label table smaller than label universe");

  // Resolve the label-pair distances up front, applying the missing policy.
  MatrixRM pair_cost(train.label_universe(), valid.label_universe());
  const double imputed = table.max_finite();
  for (int a = 0; a < train.label_universe(); ++a) {
    for (int b = 0; b < valid.label_universe(); ++b) {
      const double entry = table.values(a, b);
      pair_cost(a, b) = std::isfinite(entry) ? entry : imputed;
    }
  }
  if (cfg.missing_policy == MissingLabelPolicy::error && cfg.c_weight > 0.0) {
    std::vector<bool> train_uses(train.label_universe(), false);
    std::vector<bool> valid_uses(valid.label_universe(), false);
    for (Eigen::Index i = 0; i < train.n(); ++i) {
      train_uses[train.labels()[i]] = true;
    }
    for (Eigen::Index j = 0; j < valid.n(); ++j) {
      valid_uses[valid.labels()[j]] = true;
    }
    for (int a = 0; a < train.label_universe(); ++a) {
      for (int b = 0; b < valid.label_universe(); ++b) {
        if (train_uses[a] && valid_uses[b] &&
            !std::isfinite(table.values(a, b))) {
          fail(errc::missing_label_policy_violation,
               "label pair (" + std::to_string(a) + ", " + std::to_string(b) +
                   ") required but absent from the distance table");
        }
      }
    }
  }

  const Eigen::Index n = train.n();
  const Eigen::Index m = valid.n();
  const Eigen::Index d = train.dim();
  const double fw = cfg.feature_weight;
  const double cw = cfg.c_weight;
  MatrixRM values(n, m);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* xi = train.features().data() + i * d;
    const int yi = train.labels()[i];
    double* out = values.data() + i * m;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double* xj = valid.features().data() + j * d;
      double acc = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        const double diff = xi[c] - xj[c];
        acc += diff * diff;
      }
      const double ground = cfg.squared_ground ? acc : std::sqrt(acc);
      out[j] = fw * ground + cw * pair_cost(yi, valid.labels()[j]);
    }
  }
  return CostMatrix(std::move(values), train.masses(), valid.masses());
}

DatasetDistanceResult dataset_distance(const LabeledDataset& train,
                                       const LabeledDataset& valid,
                                       const HybridCostConfig& cfg) {
  DatasetDistanceResult result;
  result.table =
      label_distance_table(train, valid, cfg.inner, cfg.squared_ground);
  const CostMatrix cost = hybrid_cost(train, valid, result.table, cfg);
  result.solution = solve(cost, cfg.outer);
  result.distance = result.solution.objective;
  return result;
}

}  // namespace lava
