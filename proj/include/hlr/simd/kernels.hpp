// include/hlr/simd/kernels.hpp

// Copyright 2026  The hlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Inner-loop kernels with a scalar reference implementation and an AVX2/FMA
// variant. The variant is picked once at startup from CPUID; HLR_SIMD=scalar
// in the environment forces the reference path. Everything above this layer
// calls the wrappers at the bottom of the file and never touches intrinsics.
//
// The two paths agree to rounding (the AVX2 reductions use four partial sums),
// so results are bit-reproducible for a given ISA but not across ISAs.

#include <cstddef>
#include <span>

namespace hlr::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// sum_i (a_i - b_i)^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// x_i *= num_i / (den_i + eps)
  void (*multiplicative_update)(double* x, const double* num, const double* den, double eps,
                                std::size_t n);
  /// y_i = max(x_i, 0); mask_i = x_i > 0 ? 1 : 0 (mask may be null)
  void (*relu)(const double* x, double* y, double* mask, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// Null when the AVX2 translation unit was not built.
const KernelTable* avx2_kernels() noexcept;

bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Throws hlr::ConfigError if `isa` is not supported on this machine.
void set_active_isa(Isa isa);
const char* isa_name(Isa isa) noexcept;
const KernelTable& active_kernels() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active_kernels().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  return active_kernels().squared_distance(a.data(), b.data(), a.size());
}
inline void multiplicative_update(std::span<double> x, std::span<const double> num,
                                  std::span<const double> den, double eps) noexcept {
  active_kernels().multiplicative_update(x.data(), num.data(), den.data(), eps, x.size());
}
inline void relu(std::span<const double> x, std::span<double> y, double* mask = nullptr) noexcept {
  active_kernels().relu(x.data(), y.data(), mask, x.size());
}

}  // namespace hlr::simd
