#pragma once

#include <span>

#include "fpm/image.hpp"

namespace fpm {

enum class Direction { forward, inverse };

/// Unitary 2D DFT: both directions scale by 1/sqrt(rows*cols), so
/// dft2(dft2(x, forward), inverse) == x and Parseval holds without factors.
/// Backed by FFTW (estimate-mode plans, cached per shape, safe to call from
/// several threads).
ComplexImage dft2(const ComplexImage& img, Direction dir);
void dft2_inplace(ComplexImage& img, Direction dir);

/// Unnormalized 1D DFT, out[k] = sum_n in[n] exp(-+2 pi i k n / N).
void dft1(std::span<const Complex> in, std::span<Complex> out, Direction dir);

}  // namespace fpm
