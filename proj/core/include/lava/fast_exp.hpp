#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>

namespace lava::detail {

// Cephes-style exp kernel: split x = n*ln2 + g, evaluate a rational minimax
// approximation of exp(g), scale by 2^n through the exponent bits. Relative
// error is a few ulp over the finite range. Inputs are clamped to
// [-708, 709], so -inf (the log of a zero mass) maps to ~3e-308 and huge
// arguments saturate at ~8e307 instead of overflowing. One fixed code path
// keeps solver output bit-identical across runs and thread counts.

inline double exp_kernel(double xc) {
  // floor() for the bounded argument range, written as truncate-and-fix so
  // the surrounding loops stay branch-free and vectorizable.
  const double scaled = 1.4426950408889634073599 * xc + 0.5;
  std::int64_t n = static_cast<std::int64_t>(scaled);
  n -= static_cast<double>(n) > scaled;
  const double shift = static_cast<double>(n);

  double g = xc - shift * 6.93145751953125e-1;
  g -= shift * 1.42860682030941723212e-6;
  const double gg = g * g;
  const double p =
      g * ((1.26177193074810590878e-4 * gg + 3.02994407707441961300e-2) * gg +
           9.99999999999999999910e-1);
  const double q =
      ((3.00198505138664455042e-6 * gg + 2.52448340349684104192e-3) * gg +
       2.27265548208155028766e-1) *
          gg +
      2.00000000000000000005e0;
  const double r = 1.0 + 2.0 * p / (q - p);

  const auto bits = static_cast<std::uint64_t>(n + 1023) << 52;
  double two_to_n;
  std::memcpy(&two_to_n, &bits, sizeof two_to_n);
  return r * two_to_n;
}

inline double clamp_exp_arg(double x) {
  double xc = x;
  xc = xc < -708.0 ? -708.0 : xc;
  xc = xc > 709.0 ? 709.0 : xc;
  return xc;
}

inline double fast_exp(double x) { return exp_kernel(clamp_exp_arg(x)); }

/// data[j] <- exp(data[j] - shift), vectorized. The clamp and kernel run as
/// separate sweeps: gcc if-converts each on its own but not their fusion.
inline void exp_inplace(double* data, std::size_t count, double shift = 0.0) {
  for (std::size_t j = 0; j < count; ++j) {
    data[j] = clamp_exp_arg(data[j] - shift);
  }
  for (std::size_t j = 0; j < count; ++j) {
    data[j] = exp_kernel(data[j]);
  }
}

/// Fixed-order eight-lane sum: deterministic for a given input, independent
/// of thread count, and free of the sequential dependence that blocks SIMD.
inline double sum_lanes(const double* data, std::size_t count) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    for (int lane = 0; lane < 8; ++lane) acc[lane] += data[j + lane];
  }
  for (int lane = 0; j < count; ++j, ++lane) acc[lane] += data[j];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

/// Fixed-order eight-lane dot product.
inline double dot_lanes(const double* a, const double* b, std::size_t count) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    for (int lane = 0; lane < 8; ++lane) {
      acc[lane] += a[j + lane] * b[j + lane];
    }
  }
  for (int lane = 0; j < count; ++j, ++lane) acc[lane] += a[j] * b[j];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

}  // namespace lava::detail
