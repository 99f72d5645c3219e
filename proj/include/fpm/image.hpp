#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "fpm/error.hpp"

namespace fpm {

using Complex = std::complex<double>;

/// 64-byte aligned storage so SIMD kernels and FFTW plans see the same alignment.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n == 0) return nullptr;
    std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
    void* p = std::aligned_alloc(alignment, bytes);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

/// Dense row-major 2D grid. Sample (p, q) is row p, column q; spectra use the
/// same layout with DC at (0, 0).
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), samples_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return samples_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept {
    return samples_[r * cols_ + c];
  }
  T& operator[](std::size_t i) noexcept { return samples_[i]; }
  const T& operator[](std::size_t i) const noexcept { return samples_[i]; }

  T* data() noexcept { return samples_.data(); }
  const T* data() const noexcept { return samples_.data(); }
  std::span<T> span() noexcept { return {samples_.data(), samples_.size()}; }
  std::span<const T> span() const noexcept { return {samples_.data(), samples_.size()}; }
  std::span<T> row(std::size_t r) noexcept { return {samples_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept {
    return {samples_.data() + r * cols_, cols_};
  }

  auto begin() noexcept { return samples_.begin(); }
  auto end() noexcept { return samples_.end(); }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  bool same_shape(const Image<T>& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  template <typename U>
  bool same_shape(const Image<U>& other) const noexcept {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Image<T>& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T, AlignedAllocator<T>> samples_;
};

using RealImage = Image<double>;
using ComplexImage = Image<Complex>;

/// Throws DataError unless both axes have at least `minimum` samples.
void require_min_size(std::size_t rows, std::size_t cols, std::size_t minimum,
                      const std::string& what);

template <typename T>
void require_same_shape(const Image<T>& a, const Image<T>& b, const std::string& what) {
  if (!a.same_shape(b)) {
    throw DataError(what + ": dimension mismatch (" + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + ")");
  }
}

bool all_finite(const RealImage& img);
bool all_finite(const ComplexImage& img);

ComplexImage to_complex(const RealImage& re);
ComplexImage to_complex(const RealImage& re, const RealImage& im);
ComplexImage from_polar(const RealImage& amplitude, const RealImage& phase);
RealImage real_part(const ComplexImage& z);
RealImage imag_part(const ComplexImage& z);
RealImage magnitude(const ComplexImage& z);
/// Argument in (-pi, pi].
RealImage phase(const ComplexImage& z);

double l2_norm(const RealImage& img);
double l2_norm(const ComplexImage& img);
double max_abs(const RealImage& img);
double max_abs(const ComplexImage& img);
double mean(const RealImage& img);
Complex mean(const ComplexImage& img);

/// Top-left anchored crop; throws DataError when the window leaves the image.
template <typename T>
Image<T> crop(const Image<T>& src, std::size_t row0, std::size_t col0, std::size_t rows,
              std::size_t cols) {
  if (row0 + rows > src.rows() || col0 + cols > src.cols()) {
    throw DataError("crop window exceeds image bounds");
  }
  Image<T> out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = src(row0 + r, col0 + c);
  }
  return out;
}

/// Moves DC from (0, 0) to (rows/2, cols/2) for display.
template <typename T>
Image<T> fftshift(const Image<T>& src) {
  Image<T> out(src.rows(), src.cols());
  const std::size_t sr = src.rows() / 2, sc = src.cols() / 2;
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < src.cols(); ++c) {
      out((r + sr) % src.rows(), (c + sc) % src.cols()) = src(r, c);
    }
  }
  return out;
}

/// Signed frequency index of bin i on an n-point unshifted axis.
inline long signed_frequency(std::size_t i, std::size_t n) {
  return i < (n + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

}  // namespace fpm
