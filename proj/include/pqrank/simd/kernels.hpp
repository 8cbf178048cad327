#pragma once
// Dense double-precision kernels used by the learners.
//
// Every kernel has a scalar reference implementation plus optional
// vectorized variants (AVX2+FMA on x86-64, NEON on AArch64). The active
// variant is chosen once at startup from CPU capabilities and can be
// overridden with the PQRANK_ISA environment variable ("scalar", "avx2",
// "neon") or force_isa().
//
// Matrices are row-major: W has `rows` rows of `cols` contiguous values.

#include <cstddef>
#include <span>
#include <string_view>

namespace pqrank::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x + bias   (bias may be null)
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* y);
  // x_grad += W^T g
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* g,
                     double* x_grad);
  // G += g x^T
  void (*ger_acc)(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
                  const double* x);
};

const KernelTable& scalar_kernels();
#if defined(PQRANK_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(PQRANK_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

// Best ISA this binary was built with and the CPU supports.
Isa detected_isa();
bool isa_available(Isa isa);

// Currently selected kernel table.
const KernelTable& kernels();

// Select a specific variant; throws if it is not available.
void force_isa(Isa isa);
Isa active_isa();

// Restores the previous ISA on destruction.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { force_isa(isa); }
  ~ScopedIsa() { force_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

// Span conveniences over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace pqrank::simd
