#include "fpm/embedding.hpp"

#include <string>

namespace fpm {

namespace {

std::vector<std::size_t> axis_indices(std::size_t big, std::size_t n, long shift,
                                      const char* axis) {
  const long lo = signed_frequency(n / 2 + n % 2, n) + shift;  // most negative LR frequency
  const long hi = signed_frequency(n / 2 + n % 2 - 1, n) + shift;
  const long big_lo = signed_frequency(big / 2 + big % 2, big);
  const long big_hi = static_cast<long>(big) - 1 + big_lo;
  if (lo < big_lo || hi > big_hi) {
    throw DataError(std::string("sub-spectrum leaves the HR grid along ") + axis + " (shift " +
                    std::to_string(shift) + ", window " + std::to_string(n) + ", grid " +
                    std::to_string(big) + "); increase the upsampling factor");
  }
  std::vector<std::size_t> idx(n);
  const long b = static_cast<long>(big);
  for (std::size_t j = 0; j < n; ++j) {
    const long f = signed_frequency(j, n) + shift;
    idx[j] = static_cast<std::size_t>(((f % b) + b) % b);
  }
  return idx;
}

}  // namespace

SpectralWindow spectral_window(std::size_t hr_rows, std::size_t hr_cols, std::size_t n,
                               PixelShift shift) {
  if (n > hr_rows || n > hr_cols) throw DataError("LR window larger than the HR grid");
  return {axis_indices(hr_rows, n, shift.y, "rows"), axis_indices(hr_cols, n, shift.x, "columns")};
}

void gather(const ComplexImage& hr, const SpectralWindow& w, ComplexImage& out) {
  const std::size_t n = w.rows.size();
  if (out.rows() != n || out.cols() != w.cols.size()) out = ComplexImage(n, w.cols.size());
  for (std::size_t r = 0; r < n; ++r) {
    const Complex* src = hr.row(w.rows[r]).data();
    Complex* dst = out.row(r).data();
    for (std::size_t c = 0; c < w.cols.size(); ++c) dst[c] = src[w.cols[c]];
  }
}

void scatter(ComplexImage& hr, const SpectralWindow& w, const ComplexImage& in) {
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    Complex* dst = hr.row(w.rows[r]).data();
    const Complex* src = in.row(r).data();
    for (std::size_t c = 0; c < w.cols.size(); ++c) dst[w.cols[c]] = src[c];
  }
}

}  // namespace fpm
