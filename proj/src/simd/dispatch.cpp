// src/simd/dispatch.cpp

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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hlr/error.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::simd {

#ifndef HLR_HAVE_AVX2
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(HLR_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() noexcept {
  if (const char* env = std::getenv("HLR_SIMD"); env && std::string_view(env) == "scalar")
    return &scalar_kernels();
  if (cpu_has_avx2_fma() && avx2_kernels()) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return avx2_kernels() != nullptr && cpu_has_avx2_fma();
  }
  return false;
}

Isa active_isa() noexcept { return active_kernels().isa; }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa))
    throw ConfigError(std::string("SIMD path not supported on this machine: ") + isa_name(isa));
  active_slot().store(isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels());
}

const char* isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_relaxed); }

}  // namespace hlr::simd
