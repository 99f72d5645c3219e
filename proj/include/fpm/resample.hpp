#pragma once

#include <cstddef>

#include "fpm/image.hpp"

namespace fpm {

enum class Interpolation { nearest, bilinear, bicubic };

/// Resamples to rows x cols with pixel-center alignment and clamped borders.
/// Bicubic uses the Keys kernel (a = -0.5).
RealImage resample(const RealImage& src, std::size_t rows, std::size_t cols, Interpolation mode);

}  // namespace fpm
