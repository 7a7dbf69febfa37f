// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/kernels.hpp"

#include <cstdlib>
#include <string>

#include "dada/common/errors.hpp"

namespace dada::kernels {

#if !defined(DADA_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(DADA_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(DADA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(DADA_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_table();
    case Isa::kAvx2:
      return avx2_table();
    case Isa::kNeon:
      return neon_table();
  }
  return nullptr;
}

const KernelTable* select_default() {
  if (const char* forced = std::getenv("DADA_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == isa_name(isa) && cpu_supports(isa) && table_for(isa)) {
        return table_for(isa);
      }
    }
  }
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (cpu_supports(isa) && table_for(isa)) return table_for(isa);
  }
  return &scalar_table();
}

const KernelTable*& active_slot() {
  static const KernelTable* slot = select_default();
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot(); }

void set_active(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (!table || !cpu_supports(isa)) {
    throw ArgumentError("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  active_slot() = table;
}

}  // namespace dada::kernels
