#include "lava/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lava/rng.hpp"
#include "lava/sha256.hpp"

namespace lava {
namespace {

double mass_sum(const Eigen::VectorXd& masses) {
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < masses.size(); ++i) total += masses[i];
  return static_cast<double>(total);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  require(ec == std::errc() && ptr == end, errc::parse_error,
          "line " + std::to_string(line_no) + ": cannot parse number '" +
              token + "'");
  return value;
}

long parse_label(const std::string& token, std::size_t line_no) {
  long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  require(ec == std::errc() && ptr == end, errc::parse_error,
          "line " + std::to_string(line_no) + ": cannot parse label '" +
              token + "'");
  require(value >= 0, errc::parse_error,
          "line " + std::to_string(line_no) + ": negative label");
  return value;
}

void append_double(std::string& out, double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  out.append(buffer, ptr);
}

}  // namespace

LabeledDataset::LabeledDataset(MatrixRM features, std::vector<int> labels,
                               Eigen::VectorXd masses, int label_universe)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      masses_(std::move(masses)),
      label_universe_(label_universe) {
  require(features_.rows() >= 1 && features_.cols() >= 1, errc::empty_dataset,
          "dataset needs at least one row and one feature");
  require(static_cast<Eigen::Index>(labels_.size()) == features_.rows(),
          errc::dimension_mismatch, "labels/features row count mismatch");
  require(masses_.size() == features_.rows(), errc::dimension_mismatch,
          "masses/features row count mismatch");
  require(features_.allFinite(), errc::non_finite_feature,
          "features contain non-finite values");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    require(labels_[i] >= 0 && labels_[i] < label_universe_, errc::parse_error,
            "label " + std::to_string(labels_[i]) + " at row " +
                std::to_string(i) + " outside universe [0, " +
                std::to_string(label_universe_) + ")");
  }
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    require(masses_[i] >= 0.0, errc::negative_mass,
            "negative mass at row " + std::to_string(i));
  }
  const double total = mass_sum(masses_);
  require(std::abs(total - 1.0) <= 1e-12, errc::mass_sum_mismatch,
          "masses sum to " + std::to_string(total) + ", expected 1");
}

LabeledDataset LabeledDataset::with_uniform_masses(MatrixRM features,
                                                   std::vector<int> labels,
                                                   int label_universe) {
  const Eigen::Index n = features.rows();
  require(n >= 1, errc::empty_dataset, "dataset needs at least one row");
  if (label_universe < 0) {
    int max_label = 0;
    for (int label : labels) max_label = std::max(max_label, label);
    label_universe = max_label + 1;
  }
  Eigen::VectorXd masses =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return LabeledDataset(std::move(features), std::move(labels),
                        std::move(masses), label_universe);
}

LabeledDataset load_csv(const std::filesystem::path& path, MassPolicy policy) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open file: " + path.string());

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::empty_dataset,
          "empty file: " + path.string());
  const std::vector<std::string> header = split_line(line);

  const bool has_mass = !header.empty() && header.back() == "mass";
  const std::size_t d = header.size() - (has_mass ? 2 : 1);
  require(d >= 1 && header[d] == "label", errc::malformed_header,
          "expected header f0..f{d-1},label[,mass]");
  for (std::size_t c = 0; c < d; ++c) {
    require(header[c] == "f" + std::to_string(c), errc::malformed_header,
            "expected feature column f" + std::to_string(c) + ", got '" +
                header[c] + "'");
  }
  require(has_mass || policy == MassPolicy::uniform,
          errc::malformed_header,
          "mass column requested but not present in " + path.string());

  std::vector<double> feature_values;
  std::vector<int> labels;
  std::vector<double> masses;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_line(line);
    require(fields.size() == header.size(), errc::parse_error,
            "line " + std::to_string(line_no) + ": expected " +
                std::to_string(header.size()) + " fields, got " +
                std::to_string(fields.size()));
    for (std::size_t c = 0; c < d; ++c) {
      const double value = parse_double(fields[c], line_no);
      require(std::isfinite(value), errc::non_finite_feature,
              "line " + std::to_string(line_no) + ": non-finite feature f" +
                  std::to_string(c));
      feature_values.push_back(value);
    }
    labels.push_back(static_cast<int>(parse_label(fields[d], line_no)));
    if (has_mass) {
      const double mass = parse_double(fields[d + 1], line_no);
      require(mass >= 0.0, errc::negative_mass,
              "line " + std::to_string(line_no) + ": negative mass");
      masses.push_back(mass);
    }
  }
  const std::size_t n = labels.size();
  require(n >= 1, errc::empty_dataset, "no data rows in " + path.string());

  MatrixRM features(n, d);
  std::copy(feature_values.begin(), feature_values.end(), features.data());

  int max_label = 0;
  for (int label : labels) max_label = std::max(max_label, label);

  LabeledDataset ds = [&] {
    if (policy == MassPolicy::column) {
      Eigen::VectorXd mass_vec =
          Eigen::Map<Eigen::VectorXd>(masses.data(), masses.size());
      return LabeledDataset(std::move(features), std::move(labels),
                            std::move(mass_vec), max_label + 1);
    }
    return LabeledDataset::with_uniform_masses(std::move(features),
                                               std::move(labels));
  }();
  ds.attach_manifest(make_manifest(path, ds, policy));
  return ds;
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::string out;
  for (Eigen::Index c = 0; c < ds.dim(); ++c) {
    out += "f" + std::to_string(c) + ",";
  }
  out += "label,mass\n";
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index c = 0; c < ds.dim(); ++c) {
      append_double(out, ds.features()(i, c));
      out.push_back(',');
    }
    out += std::to_string(ds.labels()[i]);
    out.push_back(',');
    append_double(out, ds.masses()[i]);
    out.push_back('\n');
  }
  std::ofstream file(path, std::ios::binary);
  require(file.good(), errc::io_error, "cannot write file: " + path.string());
  file << out;
}

LabeledDataset subsample(const LabeledDataset& ds, std::size_t k,
                         std::uint64_t seed) {
  require(k >= 1 && k <= static_cast<std::size_t>(ds.n()), errc::k_too_large,
          "subsample size k=" + std::to_string(k) + " outside [1, n]");
  Rng rng(seed);
  const std::vector<std::size_t> chosen =
      rng.sample_without_replacement(ds.n(), k);

  MatrixRM features(k, ds.dim());
  std::vector<int> labels(k);
  for (std::size_t i = 0; i < k; ++i) {
    features.row(i) = ds.features().row(chosen[i]);
    labels[i] = ds.labels()[chosen[i]];
  }
  Eigen::VectorXd masses =
      Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  return LabeledDataset(std::move(features), std::move(labels),
                        std::move(masses), ds.label_universe());
}

LabeledDataset duplicate_concat(const LabeledDataset& ds, std::size_t times) {
  require(times >= 1, errc::invalid_argument, "times must be >= 1");
  const auto n = static_cast<std::size_t>(ds.n());
  require(n <= std::numeric_limits<std::size_t>::max() / times,
          errc::invalid_argument, "n * times overflows");
  const std::size_t total = n * times;

  MatrixRM features(total, ds.dim());
  std::vector<int> labels(total);
  Eigen::VectorXd masses(total);
  for (std::size_t rep = 0; rep < times; ++rep) {
    features.middleRows(rep * n, n) = ds.features();
    for (std::size_t i = 0; i < n; ++i) {
      labels[rep * n + i] = ds.labels()[i];
      masses[rep * n + i] = ds.masses()[i] / static_cast<double>(times);
    }
  }
  return LabeledDataset(std::move(features), std::move(labels),
                        std::move(masses), ds.label_universe());
}

DatasetManifest make_manifest(const std::filesystem::path& source,
                              const LabeledDataset& ds, MassPolicy policy) {
  DatasetManifest manifest;
  manifest.source = source.string();
  manifest.n = static_cast<std::size_t>(ds.n());
  manifest.d = static_cast<std::size_t>(ds.dim());
  manifest.label_universe = ds.label_universe();
  manifest.checksum_sha256 = sha256_file(source);
  manifest.mass_policy = policy;
  return manifest;
}

}  // namespace lava
