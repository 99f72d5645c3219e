#include "fpm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fpm {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("geometry.") + field + " must be a positive finite number");
  }
}

double led_offset(std::size_t index, std::size_t count, double pitch) {
  return (static_cast<double>(index) - (static_cast<double>(count) - 1.0) / 2.0) * pitch;
}

}  // namespace

void SystemGeometry::validate() const {
  if (led_rows == 0) throw ConfigError("geometry.led_rows must be at least 1");
  if (led_cols == 0) throw ConfigError("geometry.led_cols must be at least 1");
  require_positive(led_pitch, "led_pitch");
  require_positive(led_to_sample, "led_to_sample");
  require_positive(wavelength, "wavelength");
  require_positive(camera_pixel, "camera_pixel");
  require_positive(magnification, "magnification");
  if (!(objective_na > 0.0 && objective_na < 1.0)) {
    throw ConfigError("geometry.objective_na must lie in (0, 1)");
  }
  if (lr_size < 2) throw ConfigError("geometry.lr_size must be at least 2");
  // Nyquist for the coherent field passed by the pupil (cutoff NA / lambda).
  const double limit = wavelength / (2.0 * objective_na);
  if (object_pixel() > limit) {
    throw ConfigError("geometry.camera_pixel: object-plane pixel " + std::to_string(object_pixel()) +
                      " m exceeds the Nyquist limit lambda/(2 NA) = " + std::to_string(limit) +
                      " m");
  }
}

double SystemGeometry::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

double SystemGeometry::spectral_step() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(lr_size) * object_pixel());
}

double SystemGeometry::pupil_radius_pixels() const {
  return wavenumber() * objective_na / spectral_step();
}

Vec2 wavevector_for_led(const SystemGeometry& geom, std::size_t row, std::size_t col) {
  if (row >= geom.led_rows || col >= geom.led_cols) {
    throw ConfigError("LED (" + std::to_string(row) + ", " + std::to_string(col) +
                      ") outside the " + std::to_string(geom.led_rows) + "x" +
                      std::to_string(geom.led_cols) + " array");
  }
  const double x = led_offset(col, geom.led_cols, geom.led_pitch);
  const double y = led_offset(row, geom.led_rows, geom.led_pitch);
  const double r = std::sqrt(x * x + y * y + geom.led_to_sample * geom.led_to_sample);
  const double k0 = geom.wavenumber();
  return {-k0 * x / r, -k0 * y / r};
}

std::vector<LedIndex> center_window(const SystemGeometry& geom, std::size_t rows,
                                    std::size_t cols) {
  if (rows == 0 || cols == 0 || rows > geom.led_rows || cols > geom.led_cols) {
    throw ConfigError("LED window " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " does not fit the " + std::to_string(geom.led_rows) + "x" +
                      std::to_string(geom.led_cols) + " array");
  }
  const std::size_t r0 = (geom.led_rows - rows) / 2;
  const std::size_t c0 = (geom.led_cols - cols) / 2;
  std::vector<LedIndex> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.push_back({r0 + r, c0 + c});
  }
  return out;
}

std::vector<LedIndex> all_leds(const SystemGeometry& geom) {
  return center_window(geom, geom.led_rows, geom.led_cols);
}

double max_illumination_sine(const SystemGeometry& geom, const std::vector<LedIndex>& lit) {
  double best = 0.0;
  for (const auto& led : lit) {
    const Vec2 k = wavevector_for_led(geom, led.row, led.col);
    best = std::max(best, std::hypot(k.x, k.y) / geom.wavenumber());
  }
  return best;
}

ComplexImage pupil_mask(const SystemGeometry& geom, std::size_t grid_size, double spectral_step,
                        const PupilSpec& pupil) {
  if (!(spectral_step > 0.0)) throw ConfigError("pupil_mask: spectral_step must be positive");
  if (pupil.aberration_phase &&
      (pupil.aberration_phase->rows() != grid_size || pupil.aberration_phase->cols() != grid_size)) {
    throw ConfigError("pupil.aberration_phase must be " + std::to_string(grid_size) + "x" +
                      std::to_string(grid_size) + " to match the LR spectral grid");
  }
  const double k0 = geom.wavenumber();
  const double cutoff = k0 * geom.objective_na;
  ComplexImage mask(grid_size, grid_size);
  for (std::size_t r = 0; r < grid_size; ++r) {
    const double ky = static_cast<double>(signed_frequency(r, grid_size)) * spectral_step;
    for (std::size_t c = 0; c < grid_size; ++c) {
      const double kx = static_cast<double>(signed_frequency(c, grid_size)) * spectral_step;
      const double k2 = kx * kx + ky * ky;
      if (std::sqrt(k2) > cutoff) continue;
      double phi = 0.0;
      if (pupil.aberration_phase) phi += (*pupil.aberration_phase)(r, c);
      if (pupil.defocus != 0.0) phi += pupil.defocus * std::sqrt(k0 * k0 - k2);
      mask(r, c) = phi == 0.0 ? Complex(1.0, 0.0) : std::polar(1.0, phi);
    }
  }
  return mask;
}

RealImage refine_pupil_phase(const RealImage& phase, std::size_t factor) {
  if (factor <= 1) return phase;
  const std::size_t l = phase.rows();
  const std::size_t n = l * factor;
  const auto coarse_bin = [&](std::size_t j) {
    const double f = static_cast<double>(signed_frequency(j, n)) / static_cast<double>(factor);
    const long b = static_cast<long>(l);
    return static_cast<std::size_t>(((std::lround(f) % b) + b) % b);
  };
  RealImage out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = phase(coarse_bin(r), coarse_bin(c));
  }
  return out;
}

std::size_t upsampling_factor(const SystemGeometry& geom, const std::vector<LedIndex>& lit) {
  const double aperture = geom.wavenumber() *
                          (geom.objective_na + max_illumination_sine(geom, lit)) /
                          geom.spectral_step();
  const double half = static_cast<double>(geom.lr_size) / 2.0;
  const auto s = static_cast<std::size_t>(std::ceil(aperture / half - 1e-12));
  return std::max<std::size_t>(2, s);
}

PixelShift to_pixel_shift(Vec2 k, double spectral_step) {
  return {std::lround(k.x / spectral_step), std::lround(k.y / spectral_step)};
}

void ErrorModelSpec::validate(std::size_t lit_count) const {
  if (!weights.empty()) {
    if (weights.size() != lit_count) {
      throw ConfigError("error_model.weights: expected " + std::to_string(lit_count) +
                        " entries, got " + std::to_string(weights.size()));
    }
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw ConfigError("error_model.weights must be strictly positive");
      }
    }
  }
  if (!wavevector_offsets.empty()) {
    if (wavevector_offsets.size() != lit_count) {
      throw ConfigError("error_model.wavevector_offsets: expected " + std::to_string(lit_count) +
                        " entries, got " + std::to_string(wavevector_offsets.size()));
    }
    for (const auto& d : wavevector_offsets) {
      if (!std::isfinite(d.x) || !std::isfinite(d.y)) {
        throw ConfigError("error_model.wavevector_offsets must be finite");
      }
    }
  }
  switch (noise.kind) {
    case NoiseSpec::Kind::none:
      break;
    case NoiseSpec::Kind::gaussian:
      if (!(noise.sigma >= 0.0)) throw ConfigError("error_model.noise.sigma must be >= 0");
      break;
    case NoiseSpec::Kind::poisson:
      if (!(noise.photon_scale > 0.0)) {
        throw ConfigError("error_model.noise.photon_scale must be > 0");
      }
      break;
  }
  if (quantize_bits > 16) throw ConfigError("error_model.quantize_bits must be in [0, 16]");
  if (!std::isfinite(pupil.defocus)) throw ConfigError("error_model.pupil.defocus must be finite");
}

}  // namespace fpm
