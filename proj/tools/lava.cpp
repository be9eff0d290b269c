// lava: class-wise optimal-transport dataset distances and per-point data
// values, with corruption generators and detection-rate experiments.
//
// Exit codes: 0 success, 1 input/usage error (no outputs written),
// 2 numeric warning (a solver stopped before its tolerance; outputs written).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lava/detection.hpp"
#include "lava/json_io.hpp"
#include "lava/rng.hpp"
#include "lava/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverFlags {
  double epsilon = 0.1;
  double c_weight = 1.0;
  double feature_weight = 1.0;
  std::string mode = "sinkhorn";
  double tol = 1e-6;
  // Generous default: degenerate instances (e.g. a dataset against itself)
  // approach the marginal tolerance sublinearly at the default epsilon.
  int max_iters = 50'000;
  bool squared_cost = false;
  std::string missing_label = "error";
};

struct IoFlags {
  std::string train;
  std::string valid;
  std::string mass_policy = "uniform";
  std::uint64_t seed = 0;
  std::uint64_t subsample_valid = 0;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--epsilon", flags.epsilon,
                  "Entropic regularization strength")
      ->capture_default_str();
  cmd->add_option("--c-weight", flags.c_weight,
                  "Label-distance weight in the hybrid cost")
      ->capture_default_str();
  cmd->add_option("--feature-weight", flags.feature_weight,
                  "Feature-distance weight in the hybrid cost")
      ->capture_default_str();
  cmd->add_option("--mode", flags.mode, "Solver: sinkhorn|exact|barrier")
      ->check(CLI::IsMember({"sinkhorn", "exact", "barrier"}))
      ->capture_default_str();
  cmd->add_option("--tol", flags.tol, "Marginal L1 residual tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iters", flags.max_iters, "Solver iteration cap")
      ->capture_default_str();
  cmd->add_flag("--squared-cost", flags.squared_cost,
                "Use squared Euclidean ground distances");
  cmd->add_option("--missing-label", flags.missing_label,
                  "Policy for label pairs absent from the distance table")
      ->check(CLI::IsMember({"error", "impute-max"}))
      ->capture_default_str();
}

void add_io_flags(CLI::App* cmd, IoFlags& flags) {
  cmd->add_option("--train", flags.train, "Training-set CSV")->required();
  cmd->add_option("--valid", flags.valid, "Validation-set CSV")->required();
  cmd->add_option("--mass-policy", flags.mass_policy,
                  "Point masses: uniform or from a mass column")
      ->check(CLI::IsMember({"uniform", "column"}))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for any randomized step")
      ->capture_default_str();
  cmd->add_option("--subsample-valid", flags.subsample_valid,
                  "Subsample the validation set to this many points (0 = off)")
      ->capture_default_str();
  cmd->add_option("--out", flags.out, "Output directory")->required();
}

lava::HybridCostConfig build_config(const SolverFlags& flags) {
  lava::HybridCostConfig cfg;
  cfg.c_weight = flags.c_weight;
  cfg.feature_weight = flags.feature_weight;
  cfg.squared_ground = flags.squared_cost;
  cfg.missing_policy = flags.missing_label == "error"
                           ? lava::MissingLabelPolicy::error
                           : lava::MissingLabelPolicy::impute_max;
  lava::SolverConfig solver;
  if (flags.mode == "exact") {
    solver = lava::SolverConfig::exact();
  } else if (flags.mode == "barrier") {
    solver = lava::SolverConfig::barrier(flags.epsilon, flags.tol);
  } else {
    solver = lava::SolverConfig::sinkhorn(flags.epsilon, flags.tol);
  }
  solver.max_iters = flags.max_iters;
  cfg.inner = solver;
  cfg.outer = solver;
  return cfg;
}

lava::MassPolicy parse_policy(const std::string& name) {
  return name == "column" ? lava::MassPolicy::column
                          : lava::MassPolicy::uniform;
}

json flags_json(const SolverFlags& s) {
  return {{"epsilon", s.epsilon},
          {"c_weight", s.c_weight},
          {"feature_weight", s.feature_weight},
          {"mode", s.mode},
          {"tol", s.tol},
          {"max_iters", s.max_iters},
          {"squared_cost", s.squared_cost},
          {"missing_label", s.missing_label}};
}

json flags_json(const IoFlags& io) {
  return {{"train", io.train},
          {"valid", io.valid},
          {"mass_policy", io.mass_policy},
          {"seed", io.seed},
          {"subsample_valid", io.subsample_valid},
          {"out", io.out}};
}

void write_report(const fs::path& out_dir, const std::string& subcommand,
                  json flags, const std::vector<std::string>& outputs,
                  bool converged, double seconds) {
  json report = {{"version", lava::kVersion},
                 {"subcommand", subcommand},
                 {"flags", std::move(flags)},
                 {"outputs", outputs},
                 {"converged", converged},
                 {"timing_s", seconds},
                 {"threads_env",
                  std::getenv("LAVA_THREADS") ? std::getenv("LAVA_THREADS")
                                              : ""}};
  lava::write_json(out_dir / "report.json", report);
}

struct LoadedPair {
  lava::LabeledDataset train;
  lava::LabeledDataset valid;
};

LoadedPair load_pair(const IoFlags& io) {
  lava::LabeledDataset train =
      lava::load_csv(io.train, parse_policy(io.mass_policy));
  lava::LabeledDataset valid =
      lava::load_csv(io.valid, parse_policy(io.mass_policy));
  if (io.subsample_valid > 0) {
    valid = lava::subsample(valid, io.subsample_valid, io.seed);
  }
  return {std::move(train), std::move(valid)};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

int run_distance(const IoFlags& io, const SolverFlags& solver,
                 bool dump_plan) {
  Stopwatch watch;
  const LoadedPair data = load_pair(io);
  lava::HybridCostConfig cfg = build_config(solver);
  if (dump_plan) cfg.outer.plan = lava::PlanStorage::always;

  const lava::DatasetDistanceResult result =
      lava::dataset_distance(data.train, data.valid, cfg);
  const bool converged =
      result.solution.converged && result.table.all_converged;

  fs::create_directories(io.out);
  json distance = lava::to_json(result.solution);
  distance["distance"] = result.distance;
  distance["label_distance_table"] = lava::to_json(result.table);
  lava::write_json(fs::path(io.out) / "distance.json", distance);
  std::vector<std::string> outputs = {"distance.json"};
  if (dump_plan) {
    lava::write_text(fs::path(io.out) / "plan.csv",
                     lava::plan_csv(result.solution));
    outputs.push_back("plan.csv");
  }
  json flags = flags_json(io);
  flags.update(flags_json(solver));
  flags["dump_plan"] = dump_plan;
  write_report(io.out, "distance", flags, outputs, converged, watch.seconds());
  return converged ? 0 : 2;
}

int run_value(const IoFlags& io, const SolverFlags& solver) {
  Stopwatch watch;
  const LoadedPair data = load_pair(io);
  const lava::HybridCostConfig cfg = build_config(solver);

  const lava::DatasetDistanceResult result =
      lava::dataset_distance(data.train, data.valid, cfg);
  const lava::ValuationReport report = lava::calibrated_gradients(
      result.solution, data.train.masses(), data.valid.masses());
  const bool converged =
      result.solution.converged && result.table.all_converged;

  fs::create_directories(io.out);
  lava::write_text(fs::path(io.out) / "values.csv", lava::values_csv(report));
  json distance = lava::to_json(result.solution);
  distance["distance"] = result.distance;
  lava::write_json(fs::path(io.out) / "distance.json", distance);
  lava::write_json(fs::path(io.out) / "valuation.json", lava::to_json(report));

  json flags = flags_json(io);
  flags.update(flags_json(solver));
  write_report(io.out, "value", flags,
               {"values.csv", "distance.json", "valuation.json"}, converged,
               watch.seconds());
  return converged ? 0 : 2;
}

struct CorruptFlags {
  std::string input;
  std::string kind;
  std::string mass_policy = "uniform";
  double fraction = 0.25;
  double sigma_scale = 1.0;
  int target_label = 0;
  std::vector<Eigen::Index> patch_coords;
  double patch_value = 0.0;
  std::size_t count = 0;
  int base_label = 0;
  double alpha = 0.5;
  std::vector<double> blend_source;
  std::string donor;
  std::vector<std::string> per_class_counts;
  std::uint64_t seed = 0;
  std::string out;
};

int run_corrupt(const CorruptFlags& flags) {
  Stopwatch watch;
  const lava::LabeledDataset input =
      lava::load_csv(flags.input, parse_policy(flags.mass_policy));
  const lava::CorruptionKind kind =
      lava::corruption_kind_from_string(flags.kind);

  std::optional<lava::CorruptionResult> result;
  switch (kind) {
    case lava::CorruptionKind::mislabel:
      result = lava::mislabel(input, flags.fraction, flags.seed);
      break;
    case lava::CorruptionKind::feature_noise:
      result = lava::feature_noise(input, flags.fraction, flags.sigma_scale,
                                   flags.seed);
      break;
    case lava::CorruptionKind::backdoor_trigger:
      result = lava::backdoor_trigger(input, flags.fraction,
                                      flags.target_label, flags.patch_coords,
                                      flags.patch_value, flags.seed);
      break;
    case lava::CorruptionKind::feature_collision: {
      lava::require(flags.blend_source.size() == std::size_t(input.dim()),
                    lava::errc::dimension_mismatch,
                    "--blend-source needs one value per feature column");
      Eigen::VectorXd source = Eigen::Map<const Eigen::VectorXd>(
          flags.blend_source.data(), Eigen::Index(flags.blend_source.size()));
      result = lava::feature_collision(input, flags.count, flags.base_label,
                                       source, flags.alpha, flags.seed);
      break;
    }
    case lava::CorruptionKind::irrelevant_injection: {
      lava::require(!flags.donor.empty(), lava::errc::invalid_argument,
                    "--donor CSV required for irrelevant_injection");
      const lava::LabeledDataset donor =
          lava::load_csv(flags.donor, parse_policy(flags.mass_policy));
      std::map<int, std::size_t> counts;
      for (const std::string& spec : flags.per_class_counts) {
        const auto colon = spec.find(':');
        lava::require(colon != std::string::npos, lava::errc::invalid_argument,
                      "--per-class-counts entries look like LABEL:COUNT");
        counts[std::stoi(spec.substr(0, colon))] =
            std::stoul(spec.substr(colon + 1));
      }
      result = lava::irrelevant_injection(input, donor, counts, flags.seed);
      break;
    }
  }

  fs::create_directories(flags.out);
  const fs::path corrupted_path = fs::path(flags.out) / "corrupted.csv";
  lava::write_csv(result->dataset, corrupted_path);
  lava::write_json(fs::path(flags.out) / "record.json",
                   lava::to_json(result->record));
  lava::write_json(
      fs::path(flags.out) / "corrupted.manifest.json",
      lava::to_json(lava::make_manifest(corrupted_path, result->dataset,
                                        lava::MassPolicy::column)));

  json echoed = {{"input", flags.input},
                 {"kind", flags.kind},
                 {"mass_policy", flags.mass_policy},
                 {"fraction", flags.fraction},
                 {"sigma_scale", flags.sigma_scale},
                 {"target_label", flags.target_label},
                 {"patch_coords", flags.patch_coords},
                 {"patch_value", flags.patch_value},
                 {"count", flags.count},
                 {"base_label", flags.base_label},
                 {"alpha", flags.alpha},
                 {"blend_source", flags.blend_source},
                 {"donor", flags.donor},
                 {"per_class_counts", flags.per_class_counts},
                 {"seed", flags.seed},
                 {"out", flags.out}};
  write_report(flags.out, "corrupt", echoed, {"corrupted.csv", "record.json"},
               true, watch.seconds());
  return 0;
}

int run_detect(const IoFlags& io, const SolverFlags& solver,
               const std::string& record_path, std::vector<std::size_t> budgets,
               bool distance_curve, std::size_t keep_best,
               std::size_t keep_worst) {
  Stopwatch watch;
  const LoadedPair data = load_pair(io);
  const lava::CorruptionRecord record =
      lava::corruption_record_from_json(lava::read_json(record_path));
  const lava::HybridCostConfig cfg = build_config(solver);

  if (budgets.empty()) {
    budgets = lava::default_budgets(std::size_t(data.train.n()));
  }

  const lava::DatasetDistanceResult result =
      lava::dataset_distance(data.train, data.valid, cfg);
  const lava::ValuationReport report = lava::calibrated_gradients(
      result.solution, data.train.masses(), data.valid.masses());
  lava::DetectionCurve curve = lava::detection_curve(report, record, budgets);
  curve.config_echo = flags_json(solver).dump();

  std::vector<double> removal_distances;
  if (distance_curve) {
    removal_distances = lava::distance_after_removal(data.train, data.valid,
                                                     report, budgets, cfg);
  }
  std::vector<std::size_t> best, worst;
  if (keep_best > 0) {
    best = lava::select_subset(report, keep_best, lava::SubsetDirection::best);
  }
  if (keep_worst > 0) {
    worst =
        lava::select_subset(report, keep_worst, lava::SubsetDirection::worst);
  }
  const bool converged =
      result.solution.converged && result.table.all_converged;

  fs::create_directories(io.out);
  lava::write_text(fs::path(io.out) / "curve.csv", lava::curve_csv(curve));
  lava::write_json(fs::path(io.out) / "curve.json", lava::to_json(curve));
  std::vector<std::string> outputs = {"curve.csv", "curve.json"};
  if (distance_curve) {
    lava::write_text(fs::path(io.out) / "distance_curve.csv",
                     lava::distance_curve_csv(budgets, removal_distances));
    outputs.push_back("distance_curve.csv");
  }
  if (keep_best > 0 || keep_worst > 0) {
    json selection;
    if (keep_best > 0) selection["best"] = best;
    if (keep_worst > 0) selection["worst"] = worst;
    lava::write_json(fs::path(io.out) / "selection.json", selection);
    outputs.push_back("selection.json");
  }

  json flags = flags_json(io);
  flags.update(flags_json(solver));
  flags["record"] = record_path;
  flags["budgets"] = budgets;
  flags["distance_curve"] = distance_curve;
  flags["keep_best"] = keep_best;
  flags["keep_worst"] = keep_worst;
  write_report(io.out, "detect", flags, outputs, converged, watch.seconds());
  return converged ? 0 : 2;
}

struct OracleFlags {
  int size = 8;
  double epsilon_rel = 1e-3;
  std::uint64_t seed = 0;
  int fixtures = 5;
  std::string out;
};

lava::CostMatrix oracle_fixture(int n, int m, lava::Rng& rng) {
  lava::MatrixRM c(n, m);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c.data()[i] = rng.next_unit() * 2.0 + 0.01;
  }
  return lava::CostMatrix(std::move(c), Eigen::VectorXd::Constant(n, 1.0 / n),
                          Eigen::VectorXd::Constant(m, 1.0 / m));
}

int run_oracle_check(const OracleFlags& flags) {
  Stopwatch watch;
  lava::require(flags.size >= 3, lava::errc::invalid_argument,
                "--size must be at least 3");
  int failures = 0;
  json checks = json::array();
  auto verdict = [&](const std::string& name, bool pass, double value) {
    std::printf("%s: %s (%.3e)\n", pass ? "PASS" : "FAIL", name.c_str(),
                value);
    if (!pass) ++failures;
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
  };

  lava::Rng rng(flags.seed);
  int done = 0;
  std::uint64_t attempt = 0;
  while (done < flags.fixtures &&
         attempt < 64 * std::uint64_t(flags.fixtures)) {
    lava::Rng fixture_rng = rng.fork(attempt++);
    // Unequal sides keep the exact duals unique for generic costs.
    const int n = flags.size;
    const int m = std::max(2, flags.size - 1);
    const lava::CostMatrix cost = oracle_fixture(n, m, fixture_rng);
    if (!lava::duals_unique(cost)) continue;
    ++done;
    const std::string tag = " [fixture " + std::to_string(done) + "]";
    const double eps = flags.epsilon_rel * cost.mean();

    // Zero-sum of calibrated gradients from the entropic duals.
    const lava::TransportSolution entropic =
        lava::solve_sinkhorn(cost, lava::SolverConfig::sinkhorn(eps, 1e-6));
    const lava::ValuationReport report = lava::calibrated_gradients(entropic);
    const double dual_peak =
        std::max(report.calib_grad_train.cwiseAbs().maxCoeff(),
                 entropic.dual_f.cwiseAbs().maxCoeff());
    verdict("calibrated gradients sum to zero" + tag,
            std::abs(report.calib_grad_train.sum()) <= 1e-9 * dual_peak &&
                std::abs(report.calib_grad_valid.sum()) <= 1e-9 * dual_peak,
            std::abs(report.calib_grad_train.sum()));

    // Sinkhorn objective vs the exact LP.
    const lava::TransportSolution exact =
        lava::solve_exact_lp(cost, lava::SolverConfig::exact());
    const double gap =
        std::abs(entropic.objective - exact.objective) / exact.objective;
    verdict("entropic objective within 2% of exact" + tag, gap <= 0.02, gap);

    // Difference-of-values identity at a support anchor column.
    const lava::MatrixRM& plan = *exact.plan;
    bool found = false;
    for (int j = 0; j < m && !found; ++j) {
      std::vector<int> rows;
      for (int i = 0; i < n; ++i) {
        if (plan(i, j) > 1e-9) rows.push_back(i);
      }
      if (rows.size() < 2) continue;
      found = true;
      const lava::GapCheck check = lava::gap_recovery_check(
          cost, eps, std::size_t(rows[0]), std::size_t(rows[1]),
          std::size_t(j), lava::Side::train);
      verdict("gap recovery identity" + tag,
              std::abs(check.lhs - check.rhs) <=
                  1e-3 * (std::abs(check.lhs) + eps),
              std::abs(check.lhs - check.rhs));
    }
    if (!found) {
      verdict("gap recovery identity (anchor found)" + tag, false, 0.0);
    }

    // Prediction radius exists in both directions.
    const lava::RadiusResult radius = lava::empirical_radius(
        cost, lava::SolverConfig::exact(), 0, lava::Side::train, 1e-6);
    verdict("positive prediction radius" + tag,
            radius.negative_fraction > 0.0 && radius.positive_fraction > 0.0,
            radius.negative_fraction);
  }
  if (done < flags.fixtures) {
    std::printf(
        "FAIL: only %d/%d fixtures passed the dual-uniqueness screen\n", done,
        flags.fixtures);
    ++failures;
  }

  if (!flags.out.empty()) {
    fs::create_directories(flags.out);
    json echoed = {{"size", flags.size},
                   {"epsilon", flags.epsilon_rel},
                   {"seed", flags.seed},
                   {"fixtures", flags.fixtures},
                   {"out", flags.out}};
    json report = {{"version", lava::kVersion},
                   {"subcommand", "oracle-check"},
                   {"flags", echoed},
                   {"checks", checks},
                   {"failures", failures},
                   {"timing_s", watch.seconds()}};
    lava::write_json(fs::path(flags.out) / "report.json", report);
  }
  std::printf("%s: %d failure(s) in %.2f s\n",
              failures == 0 ? "OK" : "FAILED", failures, watch.seconds());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Class-wise optimal-transport dataset distances and data values"};
  app.set_version_flag("--version", std::string(lava::kVersion));
  app.require_subcommand(1);

  IoFlags dist_io;
  SolverFlags dist_solver;
  bool dump_plan = false;
  CLI::App* distance =
      app.add_subcommand("distance", "Class-wise distance between two sets");
  add_io_flags(distance, dist_io);
  add_solver_flags(distance, dist_solver);
  distance->add_flag("--dump-plan", dump_plan,
                     "Also write the dense transport plan (plan.csv)");

  IoFlags value_io;
  SolverFlags value_solver;
  CLI::App* value = app.add_subcommand(
      "value", "Per-point data values from dual potentials");
  add_io_flags(value, value_io);
  add_solver_flags(value, value_solver);

  CorruptFlags corrupt_flags;
  CLI::App* corrupt =
      app.add_subcommand("corrupt", "Inject a seeded corruption into a CSV");
  corrupt->add_option("--input", corrupt_flags.input, "Input CSV")->required();
  corrupt
      ->add_option("--kind", corrupt_flags.kind,
                   "mislabel|feature_noise|backdoor_trigger|"
                   "feature_collision|irrelevant_injection")
      ->required();
  corrupt->add_option("--mass-policy", corrupt_flags.mass_policy)
      ->check(CLI::IsMember({"uniform", "column"}))
      ->capture_default_str();
  corrupt->add_option("--fraction", corrupt_flags.fraction)
      ->capture_default_str();
  corrupt->add_option("--sigma-scale", corrupt_flags.sigma_scale)
      ->capture_default_str();
  corrupt->add_option("--target-label", corrupt_flags.target_label)
      ->capture_default_str();
  corrupt->add_option("--patch-coords", corrupt_flags.patch_coords)
      ->delimiter(',');
  corrupt->add_option("--patch-value", corrupt_flags.patch_value)
      ->capture_default_str();
  corrupt->add_option("--count", corrupt_flags.count)->capture_default_str();
  corrupt->add_option("--base-label", corrupt_flags.base_label)
      ->capture_default_str();
  corrupt->add_option("--alpha", corrupt_flags.alpha)->capture_default_str();
  corrupt->add_option("--blend-source", corrupt_flags.blend_source)
      ->delimiter(',');
  corrupt->add_option("--donor", corrupt_flags.donor, "Donor CSV");
  corrupt
      ->add_option("--per-class-counts", corrupt_flags.per_class_counts,
                   "LABEL:COUNT entries")
      ->delimiter(',');
  corrupt->add_option("--seed", corrupt_flags.seed)->capture_default_str();
  corrupt->add_option("--out", corrupt_flags.out)->required();

  IoFlags detect_io;
  SolverFlags detect_solver;
  std::string record_path;
  std::vector<std::size_t> budgets;
  bool with_distance_curve = false;
  std::size_t keep_best = 0, keep_worst = 0;
  CLI::App* detect = app.add_subcommand(
      "detect", "Detection-rate curves against a corruption record");
  add_io_flags(detect, detect_io);
  add_solver_flags(detect, detect_solver);
  detect->add_option("--record", record_path, "Corruption record JSON")
      ->required();
  detect
      ->add_option("--budgets", budgets,
                   "Removal budgets (default: 10 steps up to n/2)")
      ->delimiter(',');
  detect->add_flag("--distance-curve", with_distance_curve,
                   "Also recompute the distance after each removal budget");
  detect->add_option("--keep-best", keep_best,
                     "Write the best-K subset selection");
  detect->add_option("--keep-worst", keep_worst,
                     "Write the worst-K subset selection");

  OracleFlags oracle_flags;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Solver cross-checks on generated fixtures");
  oracle->add_option("--size", oracle_flags.size, "Fixture side length")
      ->capture_default_str();
  oracle
      ->add_option("--epsilon", oracle_flags.epsilon_rel,
                   "Epsilon as a fraction of the mean fixture cost")
      ->capture_default_str();
  oracle->add_option("--seed", oracle_flags.seed)->capture_default_str();
  oracle->add_option("--fixtures", oracle_flags.fixtures, "Fixtures per check")
      ->capture_default_str();
  oracle->add_option("--out", oracle_flags.out,
                     "Optional output directory for report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (distance->parsed()) {
      return run_distance(dist_io, dist_solver, dump_plan);
    }
    if (value->parsed()) return run_value(value_io, value_solver);
    if (corrupt->parsed()) return run_corrupt(corrupt_flags);
    if (detect->parsed()) {
      return run_detect(detect_io, detect_solver, record_path, budgets,
                        with_distance_curve, keep_best, keep_worst);
    }
    if (oracle->parsed()) return run_oracle_check(oracle_flags);
  } catch (const lava::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == lava::errc::not_converged ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
