#include "lava/json_io.hpp"

#include <charconv>
#include <fstream>

namespace lava {
namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void append_number(std::string& out, double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  out.append(buffer, ptr);
}

}  // namespace

nlohmann::json to_json(const TransportSolution& sol) {
  return {{"objective", sol.objective},
          {"residual", sol.residual},
          {"iterations", sol.iterations},
          {"dual_f", to_vector(sol.dual_f)},
          {"dual_g", to_vector(sol.dual_g)},
          {"mode", to_string(sol.mode)},
          {"epsilon", sol.epsilon},
          {"converged", sol.converged}};
}

nlohmann::json to_json(const LabelDistanceTable& table) {
  std::vector<double> values(table.values.data(),
                             table.values.data() + table.values.size());
  return {{"V_t", table.values.rows()},
          {"V_v", table.values.cols()},
          {"values", values},  // row-major
          {"present_train", table.present_train},
          {"present_valid", table.present_valid},
          {"all_converged", table.all_converged}};
}

nlohmann::json to_json(const ValuationReport& report) {
  return {{"calibrated_gradient_train", to_vector(report.calib_grad_train)},
          {"calibrated_gradient_valid", to_vector(report.calib_grad_valid)},
          {"values_train", to_vector(report.values_train)},
          {"ranking_train", report.ranking_train},
          {"mode", to_string(report.mode)},
          {"epsilon", report.epsilon},
          {"distance", report.distance},
          {"residual", report.residual},
          {"degenerate_train", report.degenerate_train},
          {"degenerate_valid", report.degenerate_valid}};
}

nlohmann::json to_json(const CorruptionRecord& record) {
  return {{"kind", to_string(record.kind)},
          {"seed", record.seed},
          {"params", record.params},
          {"corrupted_indices", record.corrupted_indices}};
}

nlohmann::json to_json(const DatasetManifest& manifest) {
  return {{"n", manifest.n},
          {"d", manifest.d},
          {"V", manifest.label_universe},
          {"checksum", manifest.checksum_sha256},
          {"mass_policy",
           manifest.mass_policy == MassPolicy::uniform ? "uniform"
                                                       : "explicit"}};
}

nlohmann::json to_json(const DetectionCurve& curve) {
  return {{"budgets", curve.budgets},
          {"rates", curve.rates},
          {"corruption_count", curve.corruption_count},
          {"seed", curve.seed},
          {"config", curve.config_echo}};
}

CorruptionRecord corruption_record_from_json(const nlohmann::json& j) {
  CorruptionRecord record;
  record.kind = corruption_kind_from_string(j.at("kind").get<std::string>());
  record.seed = j.at("seed").get<std::uint64_t>();
  record.params = j.value("params", nlohmann::json::object());
  record.corrupted_indices =
      j.at("corrupted_indices").get<std::vector<std::size_t>>();
  return record;
}

std::string values_csv(const ValuationReport& report) {
  std::string out = "index,value,calibrated_gradient,rank\n";
  for (std::size_t rank = 0; rank < report.ranking_train.size(); ++rank) {
    const std::size_t index = report.ranking_train[rank];
    out += std::to_string(index);
    out.push_back(',');
    append_number(out, report.values_train[Eigen::Index(index)]);
    out.push_back(',');
    append_number(out, report.calib_grad_train[Eigen::Index(index)]);
    out.push_back(',');
    out += std::to_string(rank);
    out.push_back('\n');
  }
  return out;
}

std::string curve_csv(const DetectionCurve& curve) {
  std::string out = "budget,rate\n";
  for (std::size_t b = 0; b < curve.budgets.size(); ++b) {
    out += std::to_string(curve.budgets[b]);
    out.push_back(',');
    append_number(out, curve.rates[b]);
    out.push_back('\n');
  }
  return out;
}

std::string distance_curve_csv(const std::vector<std::size_t>& budgets,
                               const std::vector<double>& distances) {
  require(budgets.size() == distances.size(), errc::invalid_argument,
          "budget/distance length mismatch");
  std::string out = "budget,distance\n";
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    out += std::to_string(budgets[b]);
    out.push_back(',');
    append_number(out, distances[b]);
    out.push_back('\n');
  }
  return out;
}

std::string plan_csv(const TransportSolution& sol) {
  require(sol.plan.has_value(), errc::invalid_argument,
          "transport plan was not stored for this solve");
  const MatrixRM& plan = *sol.plan;
  std::string out;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      if (j > 0) out.push_back(',');
      append_number(out, plan(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream file(path, std::ios::binary);
  require(file.good(), errc::io_error, "cannot write file: " + path.string());
  file << body;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, "invalid JSON in " + path.string() + ": " +
                                e.what());
  }
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace lava
