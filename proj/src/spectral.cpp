#include "fpm/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "fpm/kernels.hpp"

namespace fpm {

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::fft:
      return "fft";
    case Backend::dct:
      return "dct";
    case Backend::pft:
      return "pft";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  if (name == "fft") return Backend::fft;
  if (name == "dct") return Backend::dct;
  if (name == "pft") return Backend::pft;
  throw ConfigError("unknown backend '" + name + "' (expected fft, dct or pft)");
}

template <typename T>
Image<T> BoundaryImage<T>::combined() const {
  Image<T> u = u1;
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += u2[i];
  return u;
}

template <typename T>
BoundaryImage<T> boundary_image(const Image<T>& f) {
  require_min_size(f.rows(), f.cols(), 2, "boundary_image");
  const std::size_t m = f.rows(), n = f.cols();
  BoundaryImage<T> b{Image<T>(m, n), Image<T>(m, n)};
  for (std::size_t q = 0; q < n; ++q) {
    const T d = f(m - 1, q) - f(0, q);
    b.u1(0, q) = d;
    b.u1(m - 1, q) = -d;
  }
  for (std::size_t p = 0; p < m; ++p) {
    const T d = f(p, n - 1) - f(p, 0);
    b.u2(p, 0) = d;
    b.u2(p, n - 1) = -d;
  }
  return b;
}

template struct BoundaryImage<double>;
template struct BoundaryImage<Complex>;
template BoundaryImage<double> boundary_image(const RealImage&);
template BoundaryImage<Complex> boundary_image(const ComplexImage&);

KernelSpectrum kernel_spectrum(std::size_t rows, std::size_t cols) {
  require_min_size(rows, cols, 2, "kernel_spectrum");
  KernelSpectrum k{RealImage(rows, cols)};
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t x = 0; x < rows; ++x) {
    const double cx = 2.0 * std::cos(two_pi * static_cast<double>(x) / static_cast<double>(rows));
    for (std::size_t y = 0; y < cols; ++y) {
      const double cy =
          2.0 * std::cos(two_pi * static_cast<double>(y) / static_cast<double>(cols));
      k.values(x, y) = cx + cy - 4.0;
    }
  }
  k.values(0, 0) = 0.0;
  return k;
}

namespace {

// Per-shape tables for the border-driven smooth spectrum:
//   E(x, y) = [A(y) c_rows(x) + B(x) c_cols(y)] * inv_k(x, y)
// with c_rows(x) = 1 - exp(2 pi i x / M) and inv_k folding in the unitary
// 1/sqrt(MN) factor and the excluded DC bin.
struct SmoothTables {
  std::vector<double, AlignedAllocator<double>> inv_k;
  std::vector<Complex, AlignedAllocator<Complex>> c_rows;
  std::vector<Complex, AlignedAllocator<Complex>> c_cols;
};

std::shared_ptr<const SmoothTables> make_tables(std::size_t m, std::size_t n) {
  auto t = std::make_shared<SmoothTables>();
  const KernelSpectrum k = kernel_spectrum(m, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m * n));
  t->inv_k.resize(m * n);
  for (std::size_t i = 0; i < m * n; ++i) {
    t->inv_k[i] = i == 0 ? 0.0 : norm / k.values[i];
  }
  const double two_pi = 2.0 * std::numbers::pi;
  t->c_rows.resize(m);
  for (std::size_t x = 0; x < m; ++x) {
    t->c_rows[x] = 1.0 - std::polar(1.0, two_pi * static_cast<double>(x) / static_cast<double>(m));
  }
  t->c_cols.resize(n);
  for (std::size_t y = 0; y < n; ++y) {
    t->c_cols[y] = 1.0 - std::polar(1.0, two_pi * static_cast<double>(y) / static_cast<double>(n));
  }
  return t;
}

std::shared_ptr<const SmoothTables> tables_for(std::size_t m, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const SmoothTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{m, n}];
  if (!slot) slot = make_tables(m, n);
  return slot;
}

void accumulate_smooth_spectrum(const ComplexImage& f, ComplexImage& dst, double sign) {
  require_min_size(f.rows(), f.cols(), 2, "periodic/smooth decomposition");
  const std::size_t m = f.rows(), n = f.cols();
  const auto tables = tables_for(m, n);

  std::vector<Complex> a(n), b(m), a_hat(n), b_hat(m);
  for (std::size_t q = 0; q < n; ++q) a[q] = f(m - 1, q) - f(0, q);
  for (std::size_t p = 0; p < m; ++p) b[p] = f(p, n - 1) - f(p, 0);
  dft1(a, a_hat, Direction::forward);
  dft1(b, b_hat, Direction::forward);

  const auto& kt = kernels::active();
  for (std::size_t x = 0; x < m; ++x) {
    kt.border_correction_row(dst.row(x).data(), a_hat.data(), tables->c_rows[x], b_hat[x],
                             tables->c_cols.data(), tables->inv_k.data() + x * n, n, sign);
  }
}

}  // namespace

ComplexImage smooth_spectrum(const ComplexImage& f) {
  ComplexImage e_hat(f.rows(), f.cols());
  accumulate_smooth_spectrum(f, e_hat, 1.0);
  return e_hat;
}

void subtract_smooth_spectrum(const ComplexImage& f, ComplexImage& spectrum) {
  require_same_shape(f, spectrum, "subtract_smooth_spectrum");
  accumulate_smooth_spectrum(f, spectrum, -1.0);
}

Decomposition<Complex> periodic_smooth_decompose(const ComplexImage& f) {
  ComplexImage e = smooth_spectrum(f);
  dft2_inplace(e, Direction::inverse);
  ComplexImage g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= e[i];
  return {std::move(g), std::move(e)};
}

Decomposition<double> periodic_smooth_decompose(const RealImage& f) {
  const auto dz = periodic_smooth_decompose(to_complex(f));
  // e is real up to rounding: u is real and the kernel spectrum is even.
  RealImage e = real_part(dz.e);
  RealImage g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= e[i];
  return {std::move(g), std::move(e)};
}

ComplexImage pft_forward(const ComplexImage& f) {
  ComplexImage spectrum = dft2(f, Direction::forward);
  subtract_smooth_spectrum(f, spectrum);
  return spectrum;
}

ComplexImage pft_forward(const RealImage& f) { return pft_forward(to_complex(f)); }

template <typename T>
Image<T> symmetric_quadruple(const Image<T>& f) {
  const std::size_t m = f.rows(), n = f.cols();
  Image<T> out(2 * m, 2 * n);
  for (std::size_t p = 0; p < 2 * m; ++p) {
    const std::size_t sp = p < m ? p : 2 * m - 1 - p;
    for (std::size_t q = 0; q < 2 * n; ++q) {
      const std::size_t sq = q < n ? q : 2 * n - 1 - q;
      out(p, q) = f(sp, sq);
    }
  }
  return out;
}

template <typename T>
Image<T> crop_quarter(const Image<T>& ext) {
  if (ext.rows() % 2 != 0 || ext.cols() % 2 != 0) {
    throw DataError("crop_quarter: dimensions must be even, got " + std::to_string(ext.rows()) +
                    "x" + std::to_string(ext.cols()));
  }
  return crop(ext, 0, 0, ext.rows() / 2, ext.cols() / 2);
}

template RealImage symmetric_quadruple(const RealImage&);
template ComplexImage symmetric_quadruple(const ComplexImage&);
template RealImage crop_quarter(const RealImage&);
template ComplexImage crop_quarter(const ComplexImage&);

}  // namespace fpm
