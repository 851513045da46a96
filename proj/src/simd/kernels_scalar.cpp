// src/simd/kernels_scalar.cpp

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

#include "hlr/simd/kernels.hpp"

namespace hlr::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void multiplicative_update_scalar(double* x, const double* num, const double* den, double eps,
                                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= num[i] / (den[i] + eps);
}

void relu_scalar(const double* x, double* y, double* mask, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const bool on = x[i] > 0.0;
    y[i] = on ? x[i] : 0.0;
    if (mask) mask[i] = on ? 1.0 : 0.0;
  }
}

constexpr KernelTable kScalar{Isa::scalar,          dot_scalar,
                              axpy_scalar,          squared_distance_scalar,
                              multiplicative_update_scalar, relu_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace hlr::simd
