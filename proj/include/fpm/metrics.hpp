#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "fpm/image.hpp"

namespace fpm {

/// sqrt(mean |f - g|^2) as a fraction of the dynamic range of the reference f
/// (max - min; falls back to max |f|, then 1, for flat references).
double rmse(const RealImage& reference, const RealImage& estimate);

/// Same quantity without normalization.
double rms_difference(const RealImage& a, const RealImage& b);

/// Removes the global phase offset arg sum exp(j (recovered - truth)) and wraps
/// the result to (-pi, pi].
RealImage phase_align(const RealImage& recovered, const RealImage& truth);

double wrap_phase(double x);

/// Axis-aligned rectangle [row0, row1) x [col0, col1), or a straight segment
/// between two pixel centers (inclusive, rasterized by rounding).
struct Region {
  enum class Kind { rectangle, segment };
  Kind kind = Kind::rectangle;
  std::size_t row0 = 0, col0 = 0, row1 = 0, col1 = 0;

  static Region rectangle(std::size_t row0, std::size_t col0, std::size_t row1, std::size_t col1) {
    return {Kind::rectangle, row0, col0, row1, col1};
  }
  static Region segment(std::size_t row0, std::size_t col0, std::size_t row1, std::size_t col1) {
    return {Kind::segment, row0, col0, row1, col1};
  }
};

/// Population standard deviation of the phase samples inside `region`.
double background_phase_std(const RealImage& phase, const Region& region);

/// Energy on the kx = 0 and ky = 0 lines over total energy, both outside a
/// disk of `exclude_dc_radius` pixels around DC. Spectrum is unshifted.
double axis_artifact_energy(const ComplexImage& spectrum, double exclude_dc_radius = 3.0);

/// The same ratio for a spectrum of uniform magnitude: the axis pixel share.
double axis_artifact_null_reference(std::size_t rows, std::size_t cols,
                                    double exclude_dc_radius = 3.0);

/// RMS phase deviation (radians) between sub_phase and the matching window of
/// full_phase at (origin_row, origin_col), after global alignment, ignoring a
/// guard band of ceil(5%) of the sub-tile side along its edges.
double block_consistency(const RealImage& full_phase, const RealImage& sub_phase,
                         std::size_t origin_row, std::size_t origin_col);

struct MetricReport {
  std::optional<double> rmse_intensity;
  std::optional<double> rmse_phase;
  std::optional<double> background_phase_std;
  std::optional<double> axis_artifact_energy;
  std::optional<double> block_consistency;
  std::optional<double> wall_time;

  /// Flat JSON object with only the populated fields.
  std::string to_json() const;
};

}  // namespace fpm
