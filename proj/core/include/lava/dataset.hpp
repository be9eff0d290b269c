#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lava/errors.hpp"

namespace lava {

/// Dense row-major storage: one datapoint per row.
using MatrixRM =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class MassPolicy { uniform, column };

struct DatasetManifest {
  std::string source;
  std::size_t n = 0;
  std::size_t d = 0;
  int label_universe = 0;
  std::string checksum_sha256;
  MassPolicy mass_policy = MassPolicy::uniform;
};

/// A labeled dataset interpreted as a discrete measure: features x_i, integer
/// labels y_i in [0, V), and a probability mass per point. Immutable after
/// construction; all transforms return new datasets.
class LabeledDataset {
 public:
  LabeledDataset(MatrixRM features, std::vector<int> labels,
                 Eigen::VectorXd masses, int label_universe);

  /// Masses set to 1/n; label universe defaults to max(label)+1 when -1.
  static LabeledDataset with_uniform_masses(MatrixRM features,
                                            std::vector<int> labels,
                                            int label_universe = -1);

  Eigen::Index n() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }
  int label_universe() const { return label_universe_; }

  const MatrixRM& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const Eigen::VectorXd& masses() const { return masses_; }

  const std::optional<DatasetManifest>& manifest() const { return manifest_; }
  void attach_manifest(DatasetManifest manifest) {
    manifest_ = std::move(manifest);
  }

 private:
  MatrixRM features_;
  std::vector<int> labels_;
  Eigen::VectorXd masses_;
  int label_universe_ = 0;
  std::optional<DatasetManifest> manifest_;
};

/// Parses `f0..f{d-1},label[,mass]` CSV (UTF-8, '.' decimal). With the
/// uniform policy every point gets mass 1/n; with the column policy the mass
/// column is taken verbatim and must sum to 1 within 1e-12.
LabeledDataset load_csv(const std::filesystem::path& path, MassPolicy policy);

/// Full-precision writer; load_csv(write_csv(ds)) round-trips bit-exactly.
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

/// k rows drawn without replacement (seeded, portable), masses reset to 1/k.
LabeledDataset subsample(const LabeledDataset& ds, std::size_t k,
                         std::uint64_t seed);

/// Repeats the dataset `times` times with masses divided by `times`; the
/// resulting measure is distributionally identical to the input.
LabeledDataset duplicate_concat(const LabeledDataset& ds, std::size_t times);

DatasetManifest make_manifest(const std::filesystem::path& source,
                              const LabeledDataset& ds, MassPolicy policy);

}  // namespace lava
