#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpm/geometry.hpp"
#include "fpm/image.hpp"

namespace fpm {

struct GroundTruth {
  RealImage amplitude;
  RealImage phase;

  ComplexImage field() const { return from_polar(amplitude, phase); }
  /// Central rows x cols window (the tile seen by the camera when the truth
  /// carries a field margin).
  GroundTruth center_crop(std::size_t rows, std::size_t cols) const;
};

/// One LR intensity image per lit LED, in acquisition order.
struct LrStack {
  std::vector<RealImage> images;
  std::vector<LedIndex> leds;
  SystemGeometry geometry;
};

enum class TruthKind { flat, phase_only, two_image, texture };

struct TruthOptions {
  TruthKind kind = TruthKind::flat;
  std::size_t hr_size = 0;
  /// two_image: amplitude and phase sources. phase_only: phase_source only.
  std::optional<RealImage> amplitude_source;
  std::optional<RealImage> phase_source;
  /// phase_only: use phase_source verbatim (radians) instead of rescaling it.
  bool phase_verbatim = true;
  double amplitude_floor = 0.05;
  double phase_min = 0.0;
  double phase_max = 1.5707963267948966;
  /// texture: Gaussian correlation lengths in HR pixels, and the RNG seed.
  double amplitude_correlation = 2.25;
  double phase_correlation = 3.0;
  std::uint64_t seed = 0;
};

GroundTruth make_ground_truth(const TruthOptions& opts);

/// Zero-mean white noise blurred by a Gaussian of the given spatial standard
/// deviation (pixels), rescaled to [0, 1].
RealImage smooth_noise(std::size_t n, double correlation, std::uint64_t seed);

struct SimOptions {
  /// The truth covers field_margin x the camera tile per axis; each LR image
  /// is the central lr_size crop of the wider field. 1 means the truth is the
  /// tile itself (and therefore wraps periodically).
  std::size_t field_margin = 1;
};

/// Integer upsampling factor implied by a truth grid: truth side divided by
/// field_margin * lr_size. Throws DataError when it is not a whole number >= 1.
std::size_t truth_upsampling(const GroundTruth& truth, const SystemGeometry& geom,
                             std::size_t field_margin);

LrStack simulate_stack(const GroundTruth& truth, const SystemGeometry& geom,
                       const std::vector<LedIndex>& lit, const ErrorModelSpec& err,
                       const SimOptions& opts = {});

/// LED with the smallest |k| among the stack (ties by row, col).
std::size_t on_axis_index(const LrStack& stack);

}  // namespace fpm
