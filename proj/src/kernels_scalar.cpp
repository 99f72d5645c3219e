#include <algorithm>
#include <cmath>

#include "fpm/kernels.hpp"

namespace fpm::kernels {
namespace {

void scale(Complex* data, std::size_t n, double factor) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= factor;
}

inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void multiply(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cmul(a[i], b[i]);
}

void multiply_accumulate(Complex* acc, const Complex* w, const Complex* d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += cmul(w[i], d[i]);
}

void magnitude_squared(const Complex* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

double amplitude_replace(const Complex* psi, const double* amp, Complex* out, std::size_t n,
                         double floor) {
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::sqrt(psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag());
    const double diff = amp[i] - mag;
    residual += diff * diff;
    const double f = amp[i] / std::max(mag, floor);
    out[i] = {psi[i].real() * f, psi[i].imag() * f};
  }
  return residual;
}

void border_correction_row(Complex* dst, const Complex* a, Complex c_row, Complex b_row,
                           const Complex* c_col, const double* inv_k, std::size_t n,
                           double sign) {
  for (std::size_t j = 0; j < n; ++j) {
    const Complex v = cmul(a[j], c_row) + cmul(b_row, c_col[j]);
    const double s = sign * inv_k[j];
    dst[j] += Complex(v.real() * s, v.imag() * s);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar,      scale,
                                 multiply,         multiply_accumulate,
                                 magnitude_squared, amplitude_replace,
                                 border_correction_row};
  return table;
}

}  // namespace fpm::kernels
