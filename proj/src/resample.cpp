#include "fpm/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fpm {

namespace {

double source_coord(std::size_t i, std::size_t out_n, std::size_t in_n) {
  return (static_cast<double>(i) + 0.5) * static_cast<double>(in_n) / static_cast<double>(out_n) -
         0.5;
}

long clamp_index(long i, std::size_t n) {
  return std::clamp<long>(i, 0, static_cast<long>(n) - 1);
}

double keys(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

// Separable taps for one output coordinate.
struct Taps {
  std::array<long, 4> index{};
  std::array<double, 4> weight{};
  int count = 0;
};

Taps taps_for(double x, std::size_t n, Interpolation mode) {
  Taps t;
  switch (mode) {
    case Interpolation::nearest:
      t.count = 1;
      t.index[0] = clamp_index(std::lround(x), n);
      t.weight[0] = 1.0;
      break;
    case Interpolation::bilinear: {
      const double xc = std::clamp(x, 0.0, static_cast<double>(n - 1));
      const long i0 = static_cast<long>(std::floor(xc));
      const double w = xc - static_cast<double>(i0);
      t.count = 2;
      t.index = {i0, clamp_index(i0 + 1, n), 0, 0};
      t.weight = {1.0 - w, w, 0.0, 0.0};
      break;
    }
    case Interpolation::bicubic: {
      const long i0 = static_cast<long>(std::floor(x));
      const double f = x - static_cast<double>(i0);
      t.count = 4;
      for (int k = 0; k < 4; ++k) {
        t.index[k] = clamp_index(i0 - 1 + k, n);
        t.weight[k] = keys(f - static_cast<double>(k - 1));
      }
      break;
    }
  }
  return t;
}

}  // namespace

RealImage resample(const RealImage& src, std::size_t rows, std::size_t cols, Interpolation mode) {
  require_min_size(src.rows(), src.cols(), 1, "resample source");
  std::vector<Taps> row_taps(rows), col_taps(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    row_taps[r] = taps_for(source_coord(r, rows, src.rows()), src.rows(), mode);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    col_taps[c] = taps_for(source_coord(c, cols, src.cols()), src.cols(), mode);
  }
  // Columns first into an intermediate src.rows() x cols image.
  RealImage tmp(src.rows(), cols);
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Taps& t = col_taps[c];
      double acc = 0.0;
      for (int k = 0; k < t.count; ++k) acc += t.weight[k] * src(r, static_cast<std::size_t>(t.index[k]));
      tmp(r, c) = acc;
    }
  }
  RealImage out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Taps& t = row_taps[r];
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = 0; k < t.count; ++k) acc += t.weight[k] * tmp(static_cast<std::size_t>(t.index[k]), c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace fpm
