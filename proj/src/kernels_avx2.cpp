#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "fpm/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define FPM_HAVE_AVX2_PATH 1
#include <immintrin.h>
#else
#define FPM_HAVE_AVX2_PATH 0
#endif

namespace fpm::kernels {

#if FPM_HAVE_AVX2_PATH
namespace {

#define FPM_AVX2 __attribute__((target("avx2,fma")))

// Two interleaved complex values per register: [re0, im0, re1, im1].
FPM_AVX2 inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

FPM_AVX2 inline double* dp(Complex* z) { return reinterpret_cast<double*>(z); }
FPM_AVX2 inline const double* dp(const Complex* z) { return reinterpret_cast<const double*>(z); }

FPM_AVX2 void scale(Complex* data, std::size_t n, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  double* d = dp(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), f));
  }
  for (; i < n; ++i) data[i] *= factor;
}

FPM_AVX2 void multiply(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a) + 2 * i);
    const __m256d vb = _mm256_loadu_pd(dp(b) + 2 * i);
    _mm256_storeu_pd(dp(out) + 2 * i, cmul2(va, vb));
  }
  for (; i < n; ++i) {
    out[i] = {a[i].real() * b[i].real() - a[i].imag() * b[i].imag(),
              a[i].real() * b[i].imag() + a[i].imag() * b[i].real()};
  }
}

FPM_AVX2 void multiply_accumulate(Complex* acc, const Complex* w, const Complex* d,
                                  std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vw = _mm256_loadu_pd(dp(w) + 2 * i);
    const __m256d vd = _mm256_loadu_pd(dp(d) + 2 * i);
    const __m256d va = _mm256_loadu_pd(dp(acc) + 2 * i);
    _mm256_storeu_pd(dp(acc) + 2 * i, _mm256_add_pd(va, cmul2(vw, vd)));
  }
  for (; i < n; ++i) {
    acc[i] += Complex(w[i].real() * d[i].real() - w[i].imag() * d[i].imag(),
                      w[i].real() * d[i].imag() + w[i].imag() * d[i].real());
  }
}

FPM_AVX2 void magnitude_squared(const Complex* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(dp(z) + 2 * i);
    const __m256d v1 = _mm256_loadu_pd(dp(z) + 2 * i + 4);
    // hadd gives [|z0|^2, |z2|^2, |z1|^2, |z3|^2]
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

FPM_AVX2 double amplitude_replace(const Complex* psi, const double* amp, Complex* out,
                                  std::size_t n, double floor) {
  const __m256d vfloor = _mm256_set1_pd(floor);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(dp(psi) + 2 * i);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mag = _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq));  // [m0, m0, m1, m1]
    const __m128d a2 = _mm_loadu_pd(amp + i);
    const __m256d a = _mm256_permute4x64_pd(_mm256_castpd128_pd256(a2), 0x50);
    const __m256d diff = _mm256_sub_pd(a, mag);
    acc = _mm256_fmadd_pd(diff, diff, acc);
    const __m256d f = _mm256_div_pd(a, _mm256_max_pd(mag, vfloor));
    _mm256_storeu_pd(dp(out) + 2 * i, _mm256_mul_pd(v, f));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  // every magnitude appears twice in the lane layout
  double residual = 0.5 * ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
  for (; i < n; ++i) {
    const double mag = std::sqrt(psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag());
    const double diff = amp[i] - mag;
    residual += diff * diff;
    const double f = amp[i] / std::max(mag, floor);
    out[i] = {psi[i].real() * f, psi[i].imag() * f};
  }
  return residual;
}

FPM_AVX2 void border_correction_row(Complex* dst, const Complex* a, Complex c_row, Complex b_row,
                                    const Complex* c_col, const double* inv_k, std::size_t n,
                                    double sign) {
  const __m256d vc_row = _mm256_setr_pd(c_row.real(), c_row.imag(), c_row.real(), c_row.imag());
  const __m256d vb_row = _mm256_setr_pd(b_row.real(), b_row.imag(), b_row.real(), b_row.imag());
  const __m256d vsign = _mm256_set1_pd(sign);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a) + 2 * j);
    const __m256d vc = _mm256_loadu_pd(dp(c_col) + 2 * j);
    const __m256d v = _mm256_add_pd(cmul2(va, vc_row), cmul2(vb_row, vc));
    const __m128d k2 = _mm_loadu_pd(inv_k + j);
    const __m256d k = _mm256_mul_pd(_mm256_permute4x64_pd(_mm256_castpd128_pd256(k2), 0x50), vsign);
    const __m256d d = _mm256_loadu_pd(dp(dst) + 2 * j);
    _mm256_storeu_pd(dp(dst) + 2 * j, _mm256_fmadd_pd(v, k, d));
  }
  for (; j < n; ++j) {
    const Complex v = a[j] * c_row + b_row * c_col[j];
    const double s = sign * inv_k[j];
    dst[j] += Complex(v.real() * s, v.imag() * s);
  }
}

#undef FPM_AVX2

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::avx2,       scale,
                                 multiply,        multiply_accumulate,
                                 magnitude_squared, amplitude_replace,
                                 border_correction_row};
  static const bool supported = cpu_has_avx2();
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("FPM_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace fpm::kernels
