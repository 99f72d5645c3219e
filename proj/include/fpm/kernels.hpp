#pragma once

// Data-parallel inner loops shared by the transforms and the reconstruction.
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant. The variant is picked once at startup from CPUID; setting the
// environment variable FPM_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>

#include "fpm/image.hpp"

namespace fpm::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  /// data[i] *= factor
  void (*scale)(Complex* data, std::size_t n, double factor);
  /// out[i] = a[i] * b[i]
  void (*multiply)(const Complex* a, const Complex* b, Complex* out, std::size_t n);
  /// acc[i] += w[i] * d[i]
  void (*multiply_accumulate)(Complex* acc, const Complex* w, const Complex* d, std::size_t n);
  /// out[i] = |z[i]|^2
  void (*magnitude_squared)(const Complex* z, double* out, std::size_t n);
  /// out[i] = amp[i] * psi[i] / max(|psi[i]|, floor); returns sum (amp[i] - |psi[i]|)^2.
  double (*amplitude_replace)(const Complex* psi, const double* amp, Complex* out,
                              std::size_t n, double floor);
  /// dst[j] += sign * (a[j] * c_row + b_row * c_col[j]) * inv_k[j]
  /// One spectrum row of the border-image correction used by the periodic/smooth split.
  void (*border_correction_row)(Complex* dst, const Complex* a, Complex c_row, Complex b_row,
                                const Complex* c_col, const double* inv_k, std::size_t n,
                                double sign);
};

const KernelTable& scalar_table();
/// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();
const KernelTable& active();
const char* isa_name(Isa isa);

inline void scale(std::span<Complex> data, double factor) {
  active().scale(data.data(), data.size(), factor);
}

}  // namespace fpm::kernels
