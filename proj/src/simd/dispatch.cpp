#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pqrank/simd/kernels.hpp"

namespace pqrank::simd {
namespace {

bool cpu_has_avx2() {
#if defined(PQRANK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(PQRANK_HAVE_AVX2)
    case Isa::avx2:
      return avx2_kernels();
#endif
#if defined(PQRANK_HAVE_NEON)
    case Isa::neon:
      return neon_kernels();
#endif
    default:
      return scalar_kernels();
  }
}

Isa initial_isa() {
  if (const char* env = std::getenv("PQRANK_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    if (want == "neon" && isa_available(Isa::neon)) return Isa::neon;
  }
  return detected_isa();
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> active{&table_for(initial_isa())};
  return active;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    default:
      return "scalar";
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
    case Isa::neon:
#if defined(PQRANK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  }
  active_table().store(&table_for(isa), std::memory_order_release);
}

Isa active_isa() { return kernels().isa; }

}  // namespace pqrank::simd
