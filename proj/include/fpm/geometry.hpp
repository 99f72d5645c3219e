#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpm/image.hpp"

namespace fpm {

/// Lateral 2-vector. x runs along image columns, y along image rows.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct LedIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const LedIndex&) const = default;
};

/// LED array and imaging optics. Lengths in meters.
struct SystemGeometry {
  std::size_t led_rows = 0;
  std::size_t led_cols = 0;
  double led_pitch = 0.0;
  double led_to_sample = 0.0;
  double wavelength = 0.0;
  double objective_na = 0.0;
  double camera_pixel = 0.0;
  double magnification = 0.0;
  std::size_t lr_size = 0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  double object_pixel() const { return camera_pixel / magnification; }
  double wavenumber() const;
  /// Spectral step of the LR grid, rad/m per pixel.
  double spectral_step() const;
  /// Pupil cutoff (2 pi / lambda) NA expressed in spectral pixels.
  double pupil_radius_pixels() const;
};

/// Illumination wavevector of one LED, rad/m.
Vec2 wavevector_for_led(const SystemGeometry& geom, std::size_t row, std::size_t col);

/// Centered rows x cols window of the array. For parity mismatches the
/// window sits one LED towards the lower indices.
std::vector<LedIndex> center_window(const SystemGeometry& geom, std::size_t rows,
                                    std::size_t cols);
std::vector<LedIndex> all_leds(const SystemGeometry& geom);

/// Largest illumination sine over the given LEDs.
double max_illumination_sine(const SystemGeometry& geom, const std::vector<LedIndex>& lit);

struct PupilSpec {
  /// Radians, on the unshifted LR spectral grid.
  std::optional<RealImage> aberration_phase;
  double defocus = 0.0;
};

/// Circular support of radius (2 pi / lambda) NA on an unshifted grid, carrying
/// exp(j (aberration + z sqrt(k0^2 - |k|^2))) inside.
ComplexImage pupil_mask(const SystemGeometry& geom, std::size_t grid_size, double spectral_step,
                        const PupilSpec& pupil);

/// Resamples an aberration map from an L x L spectral grid to the
/// (factor L) x (factor L) grid with a spectral step finer by `factor`
/// (nearest neighbour in frequency).
RealImage refine_pupil_phase(const RealImage& phase, std::size_t factor);

/// Smallest s >= 2 such that an s * lr_size grid holds the synthetic aperture.
std::size_t upsampling_factor(const SystemGeometry& geom, const std::vector<LedIndex>& lit);

/// Wavevector in whole spectral pixels (nearest), x along columns.
struct PixelShift {
  long x = 0;
  long y = 0;
};
PixelShift to_pixel_shift(Vec2 k, double spectral_step);

struct NoiseSpec {
  enum class Kind { none, gaussian, poisson };
  Kind kind = Kind::none;
  double sigma = 0.0;         // gaussian, intensity units
  double photon_scale = 0.0;  // poisson, counts per unit intensity
};

struct ErrorModelSpec {
  /// Per lit LED (same order as the lit list); empty means all 1.
  std::vector<double> weights;
  /// Per lit LED, rad/m; empty means all 0.
  std::vector<Vec2> wavevector_offsets;
  NoiseSpec noise;
  PupilSpec pupil;
  /// 0 leaves intensities unquantized; otherwise rounds to 2^bits - 1 levels of [0, 1].
  unsigned quantize_bits = 0;
  std::uint64_t seed = 0;

  void validate(std::size_t lit_count) const;
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
  Vec2 offset(std::size_t i) const {
    return wavevector_offsets.empty() ? Vec2{} : wavevector_offsets[i];
  }
};

}  // namespace fpm
