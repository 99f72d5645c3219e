#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fpm/forward_sim.hpp"
#include "fpm/geometry.hpp"
#include "fpm/image.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

enum class GuessStrategy { bilinear, bicubic, ones, random };
enum class LedOrder { center_out, raster };
enum class Updater { gauss_newton, pie };

/// How the corrected exit wave enters the spectrum update.
///   difference: the backend transforms psi' - psi (only the change is analysed)
///   replace:    the backend transforms psi' and the update is T(psi') - P S
///   retained:   pft only; as difference, but the smooth part of every
///               correction is kept per LED and added to that LED's modeled
///               exit-wave spectrum instead of being dropped
/// All coincide for the fft backend.
enum class SpectralUpdate { difference, replace, retained };

const char* guess_name(GuessStrategy g);
GuessStrategy parse_guess(const std::string& name);
const char* led_order_name(LedOrder o);
LedOrder parse_led_order(const std::string& name);

struct ReconConfig {
  Backend backend = Backend::fft;
  GuessStrategy initial_guess = GuessStrategy::ones;
  std::size_t iterations = 30;
  /// 0 picks upsampling_factor() for the stack's lit LEDs.
  std::size_t upsampling = 0;
  bool bandpass = false;
  LedOrder led_order = LedOrder::center_out;
  /// Damping relative to max |P|^2.
  double gn_regularizer = 1e-3;
  Updater updater = Updater::gauss_newton;
  SpectralUpdate spectral_update = SpectralUpdate::difference;
  /// Joint pupil recovery (EPRY-style).
  bool pupil_update = false;
  /// Replace each measured amplitude by the non-negative part of its periodic
  /// component before iterating.
  bool periodize_measurements = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ReconState {
  /// Unitary spectrum of the recovered object on the HR grid (DC at (0, 0)).
  ComplexImage hr_spectrum;
  /// Pupil on the LR spectral grid.
  ComplexImage pupil;
  std::size_t iteration = 0;
  /// Per sweep: sum over LEDs of || sqrt(I_i) - |psi_i| ||^2.
  std::vector<double> residuals;
  std::size_t upsampling = 0;
  Backend backend = Backend::fft;
};

/// HR-domain starting spectrum. For the dct backend the returned spectrum lives
/// on the doubled (mirror-extended) grid; otherwise on hr_size x hr_size.
ComplexImage initial_guess(const LrStack& stack, GuessStrategy strategy, std::size_t hr_size,
                           Backend backend = Backend::fft, std::uint64_t seed = 0);

/// Indices into the stack in processing order.
std::vector<std::size_t> led_processing_order(const LrStack& stack, LedOrder order);

ReconState reconstruct(const LrStack& stack, const ReconConfig& cfg, const PupilSpec& pupil = {});

/// Zeroes everything outside the synthetic-aperture disk of radius
/// (2 pi / lambda)(NA + max illumination sine).
ComplexImage bandpass_filter(const ComplexImage& spectrum, const SystemGeometry& geom,
                             const std::vector<LedIndex>& lit);

/// Radius of that disk in HR spectral pixels.
double synthetic_aperture_radius_pixels(const SystemGeometry& geom,
                                        const std::vector<LedIndex>& lit);

struct Rendered {
  RealImage amplitude;
  RealImage phase;
};

/// Plain inverse DFT of the HR spectrum; phase in (-pi, pi].
Rendered render(const ReconState& state);
Rendered render_spectrum(const ComplexImage& hr_spectrum);

}  // namespace fpm
