#pragma once

#include <cstddef>
#include <vector>

#include "fpm/geometry.hpp"
#include "fpm/image.hpp"

namespace fpm {

/// HR-grid indices covered by an n x n LR spectrum whose DC sits at `shift`.
/// Both grids are unshifted; LR bin j maps to HR bin (f_j + shift) mod N.
struct SpectralWindow {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

/// Throws DataError when the window would wrap around the HR grid.
SpectralWindow spectral_window(std::size_t hr_rows, std::size_t hr_cols, std::size_t n,
                               PixelShift shift);

void gather(const ComplexImage& hr, const SpectralWindow& w, ComplexImage& out);
void scatter(ComplexImage& hr, const SpectralWindow& w, const ComplexImage& in);

}  // namespace fpm
