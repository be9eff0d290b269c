#pragma once

#include <stdexcept>
#include <string>

namespace lava {

/// Machine-readable failure categories; the CLI maps every `Error` to exit
/// code 1 (input/usage) except `not_converged`, which maps to exit code 2.
enum class errc {
  malformed_header,
  parse_error,
  non_finite_feature,
  negative_mass,
  mass_sum_mismatch,
  empty_dataset,
  k_too_large,
  single_class_dataset,
  bad_patch_coord,
  not_enough_base_rows,
  dimension_mismatch,
  missing_label_policy_violation,
  instance_too_large,
  non_finite_cost,
  not_converged,
  degenerate_size,
  degenerate_duals,
  mass_would_go_negative,
  budget_out_of_range,
  keep_out_of_range,
  io_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace lava
