#pragma once

#include <filesystem>

#include "fpm/image.hpp"

namespace fpm {

/// Grayscale Portable FloatMap: "Pf", width height, negative scale for
/// little-endian, then 32-bit floats with the bottom row first.
void write_pfm(const std::filesystem::path& path, const RealImage& img);
RealImage read_pfm(const std::filesystem::path& path);

/// Binary PGM (P5), 8- or 16-bit; samples promoted to value / maxval.
RealImage read_pgm(const std::filesystem::path& path);

/// Dispatches on the magic number (Pf or P5).
RealImage read_image(const std::filesystem::path& path);

}  // namespace fpm
