#include "fpm/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fpm/embedding.hpp"
#include "fpm/fft.hpp"
#include "fpm/kernels.hpp"
#include "fpm/resample.hpp"

namespace fpm {

const char* guess_name(GuessStrategy g) {
  switch (g) {
    case GuessStrategy::bilinear:
      return "bilinear";
    case GuessStrategy::bicubic:
      return "bicubic";
    case GuessStrategy::ones:
      return "ones";
    case GuessStrategy::random:
      return "random";
  }
  return "unknown";
}

GuessStrategy parse_guess(const std::string& name) {
  if (name == "bilinear") return GuessStrategy::bilinear;
  if (name == "bicubic") return GuessStrategy::bicubic;
  if (name == "ones") return GuessStrategy::ones;
  if (name == "random") return GuessStrategy::random;
  throw ConfigError("unknown initial guess '" + name + "' (expected bilinear, bicubic, ones or random)");
}

const char* led_order_name(LedOrder o) {
  return o == LedOrder::center_out ? "center_out" : "raster";
}

LedOrder parse_led_order(const std::string& name) {
  if (name == "center_out") return LedOrder::center_out;
  if (name == "raster") return LedOrder::raster;
  throw ConfigError("unknown led_order '" + name + "' (expected center_out or raster)");
}

void ReconConfig::validate() const {
  if (iterations < 1) throw ConfigError("recon.iterations must be at least 1");
  if (upsampling == 1) throw ConfigError("recon.upsampling must be at least 2 (0 selects it automatically)");
  if (!(gn_regularizer > 0.0) || !std::isfinite(gn_regularizer)) {
    throw ConfigError("recon.gn_regularizer must be a positive finite number");
  }
}

namespace {

std::size_t work_factor(Backend b) { return b == Backend::dct ? 2 : 1; }

ComplexImage forward_for_backend(const ComplexImage& field, Backend backend) {
  switch (backend) {
    case Backend::fft:
      return dft2(field, Direction::forward);
    case Backend::pft:
      return pft_forward(field);
    case Backend::dct:
      return dft2(symmetric_quadruple(field), Direction::forward);
  }
  return {};
}

// Recovered spectrum on the working grid -> unitary spectrum of the tile.
ComplexImage to_tile_spectrum(const ComplexImage& work, Backend backend) {
  if (backend != Backend::dct) return work;
  ComplexImage field = dft2(work, Direction::inverse);
  ComplexImage tile = crop_quarter(field);
  dft2_inplace(tile, Direction::forward);
  return tile;
}

// Keeps every factor-th signed frequency: the pupil seen on an L grid.
ComplexImage decimate_pupil(const ComplexImage& p, std::size_t factor) {
  if (factor == 1) return p;
  const std::size_t n = p.rows() / factor;
  ComplexImage out(n, n);
  const auto bin = [&](std::size_t j) {
    const long f = signed_frequency(j, n) * static_cast<long>(factor);
    const long b = static_cast<long>(p.rows());
    return static_cast<std::size_t>(((f % b) + b) % b);
  };
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = p(bin(r), bin(c));
  }
  return out;
}

// Per-pixel Gauss-Newton weight |P| conj(P) / (max|P| (|P|^2 + delta)).
void gauss_newton_weight(const ComplexImage& pupil, double regularizer, ComplexImage& w) {
  double pmax = 0.0;
  for (const Complex& v : pupil) pmax = std::max(pmax, std::abs(v));
  if (pmax == 0.0) throw NumericalError("pupil is identically zero");
  const double delta = regularizer * pmax * pmax;
  w = ComplexImage(pupil.rows(), pupil.cols());
  for (std::size_t i = 0; i < pupil.size(); ++i) {
    const double a = std::abs(pupil[i]);
    w[i] = a * std::conj(pupil[i]) / (pmax * (a * a + delta));
  }
}

// Plain alternating-projection weight conj(P) / max|P|^2.
void pie_weight(const ComplexImage& pupil, ComplexImage& w) {
  double pmax2 = 0.0;
  for (const Complex& v : pupil) pmax2 = std::max(pmax2, std::norm(v));
  if (pmax2 == 0.0) throw NumericalError("pupil is identically zero");
  w = ComplexImage(pupil.rows(), pupil.cols());
  for (std::size_t i = 0; i < pupil.size(); ++i) w[i] = std::conj(pupil[i]) / pmax2;
}

RealImage measured_amplitude(const RealImage& intensity, bool periodize) {
  RealImage amp(intensity.rows(), intensity.cols());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::sqrt(std::max(0.0, intensity[i]));
  if (periodize) {
    const auto dz = periodic_smooth_decompose(amp);
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::max(0.0, dz.g[i]);
  }
  return amp;
}

}  // namespace

ComplexImage initial_guess(const LrStack& stack, GuessStrategy strategy, std::size_t hr_size,
                           Backend backend, std::uint64_t seed) {
  if (hr_size < 2) throw ConfigError("initial_guess: hr_size must be at least 2");
  RealImage amplitude;
  switch (strategy) {
    case GuessStrategy::bilinear:
    case GuessStrategy::bicubic: {
      const RealImage& on_axis = stack.images.at(on_axis_index(stack));
      RealImage root(on_axis.rows(), on_axis.cols());
      for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(std::max(0.0, on_axis[i]));
      amplitude = resample(root, hr_size, hr_size,
                           strategy == GuessStrategy::bilinear ? Interpolation::bilinear
                                                               : Interpolation::bicubic);
      break;
    }
    case GuessStrategy::ones:
      amplitude = RealImage(hr_size, hr_size, 1.0);
      break;
    case GuessStrategy::random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      amplitude = RealImage(hr_size, hr_size);
      for (double& v : amplitude) v = dist(rng);
      break;
    }
  }
  return forward_for_backend(to_complex(amplitude), backend);
}

std::vector<std::size_t> led_processing_order(const LrStack& stack, LedOrder order) {
  std::vector<std::size_t> idx(stack.leds.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> kmag(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Vec2 k = wavevector_for_led(stack.geometry, stack.leds[i].row, stack.leds[i].col);
    kmag[i] = std::hypot(k.x, k.y);
  }
  const double tol = 1e-9 * stack.geometry.wavenumber();
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = std::pair(stack.leds[a].row, stack.leds[a].col);
    const auto kb = std::pair(stack.leds[b].row, stack.leds[b].col);
    if (order == LedOrder::center_out && std::abs(kmag[a] - kmag[b]) > tol) {
      return kmag[a] < kmag[b];
    }
    return ka < kb;
  });
  return idx;
}

ReconState reconstruct(const LrStack& stack, const ReconConfig& cfg, const PupilSpec& pupil_spec) {
  cfg.validate();
  const SystemGeometry& geom = stack.geometry;
  geom.validate();
  if (stack.images.empty() || stack.images.size() != stack.leds.size()) {
    throw DataError("LR stack is empty or its LED map does not match the image count");
  }
  const std::size_t l = geom.lr_size;
  for (const auto& img : stack.images) {
    if (img.rows() != l || img.cols() != l) {
      throw DataError("LR image is " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                      ", expected " + std::to_string(l) + "x" + std::to_string(l));
    }
    if (!all_finite(img)) throw DataError("LR image contains non-finite samples");
  }

  const std::size_t s = cfg.upsampling ? cfg.upsampling : upsampling_factor(geom, stack.leds);
  const std::size_t q = work_factor(cfg.backend);
  const std::size_t hr = s * l;
  const std::size_t n = q * l;    // working LR grid
  const std::size_t big = q * hr;  // working HR grid
  const double step = geom.spectral_step();

  // Internally the spectrum is scaled by l / hr so that an n-point inverse
  // transform of a window yields the exit wave at measurement scale.
  const double to_internal = static_cast<double>(l) / static_cast<double>(hr);
  ComplexImage spectrum = initial_guess(stack, cfg.initial_guess, hr, cfg.backend, cfg.seed);
  kernels::scale(spectrum.span(), to_internal);

  PupilSpec work_spec = pupil_spec;
  if (work_spec.aberration_phase && q > 1) {
    if (work_spec.aberration_phase->rows() != l || work_spec.aberration_phase->cols() != l) {
      throw ConfigError("pupil.aberration_phase must be " + std::to_string(l) + "x" + std::to_string(l));
    }
    work_spec.aberration_phase = refine_pupil_phase(*work_spec.aberration_phase, q);
  }
  ComplexImage pupil = pupil_mask(geom, n, step / static_cast<double>(q), work_spec);
  ComplexImage support(n, n);
  for (std::size_t i = 0; i < pupil.size(); ++i) support[i] = pupil[i] != Complex{} ? 1.0 : 0.0;

  const std::vector<std::size_t> order = led_processing_order(stack, cfg.led_order);
  std::vector<SpectralWindow> windows(stack.leds.size());
  std::vector<RealImage> amplitudes(stack.leds.size());
  std::vector<double> floors(stack.leds.size());
  for (std::size_t i = 0; i < stack.leds.size(); ++i) {
    const Vec2 k = wavevector_for_led(geom, stack.leds[i].row, stack.leds[i].col);
    PixelShift sh = to_pixel_shift(k, step);
    sh.x *= static_cast<long>(q);
    sh.y *= static_cast<long>(q);
    windows[i] = spectral_window(big, big, n, sh);
    amplitudes[i] = measured_amplitude(stack.images[i], cfg.periodize_measurements);
    floors[i] = 1e-12 * std::max(max_abs(amplitudes[i]), 1e-300);
  }

  const auto& kt = kernels::active();
  ComplexImage weight;
  const auto refresh_weight = [&] {
    if (cfg.updater == Updater::gauss_newton) {
      gauss_newton_weight(pupil, cfg.gn_regularizer, weight);
    } else {
      pie_weight(pupil, weight);
    }
  };
  refresh_weight();

  ComplexImage sub(n, n), exit_wave(n, n), psi(l, l), replaced(l, l), delta(l, l), update(n, n);
  ComplexImage sub_weight, modeled;
  const bool replace = cfg.spectral_update == SpectralUpdate::replace && cfg.backend != Backend::fft;
  const bool retained = cfg.spectral_update == SpectralUpdate::retained && cfg.backend == Backend::pft;
  std::vector<ComplexImage> smooth_parts(retained ? stack.leds.size() : 0, ComplexImage(n, n));
  ReconState state;
  state.upsampling = s;
  state.backend = cfg.backend;
  state.residuals.reserve(cfg.iterations);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    double residual = 0.0;
    for (const std::size_t i : order) {
      gather(spectrum, windows[i], sub);
      kt.multiply(sub.data(), pupil.data(), exit_wave.data(), sub.size());
      if (retained) {
        const ComplexImage& e = smooth_parts[i];
        for (std::size_t j = 0; j < e.size(); ++j) exit_wave[j] += e[j];
      }
      if (replace) modeled = exit_wave;
      dft2_inplace(exit_wave, Direction::inverse);

      // Measured pixels: the whole field, or its top-left quarter on the
      // mirror-extended grid.
      if (q == 1) {
        psi = exit_wave;
      } else {
        for (std::size_t r = 0; r < l; ++r) {
          std::copy_n(exit_wave.row(r).data(), l, psi.row(r).data());
        }
      }
      const double r2 = kt.amplitude_replace(psi.data(), amplitudes[i].data(), replaced.data(),
                                             psi.size(), floors[i]);
      if (!std::isfinite(r2)) {
        throw NumericalError("non-finite exit wave at iteration " + std::to_string(it + 1) +
                             ", LED (" + std::to_string(stack.leds[i].row) + ", " +
                             std::to_string(stack.leds[i].col) + ")");
      }
      residual += r2;
      for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = replaced[j] - psi[j];

      if (replace) {
        if (q == 1) {
          update = pft_forward(replaced);
        } else {
          ComplexImage full = exit_wave;
          for (std::size_t r = 0; r < l; ++r) {
            std::copy_n(replaced.row(r).data(), l, full.row(r).data());
          }
          update = dft2(symmetric_quadruple(crop_quarter(full)), Direction::forward);
        }
        for (std::size_t j = 0; j < update.size(); ++j) update[j] -= modeled[j];
      } else switch (cfg.backend) {
        case Backend::fft:
          update = delta;
          dft2_inplace(update, Direction::forward);
          break;
        case Backend::pft:
          update = delta;
          dft2_inplace(update, Direction::forward);
          if (retained) {
            ComplexImage& e = smooth_parts[i];
            const ComplexImage es = smooth_spectrum(delta);
            for (std::size_t j = 0; j < e.size(); ++j) {
              e[j] += es[j];
              update[j] -= es[j];
            }
          } else {
            subtract_smooth_spectrum(delta, update);
          }
          break;
        case Backend::dct:
          std::fill(update.begin(), update.end(), Complex{});
          for (std::size_t r = 0; r < l; ++r) {
            std::copy_n(delta.row(r).data(), l, update.row(r).data());
          }
          dft2_inplace(update, Direction::forward);
          break;
      }

      if (cfg.pupil_update) {
        // Pupil step uses the pre-update object window.
        double smax2 = 0.0;
        for (const Complex& v : sub) smax2 = std::max(smax2, std::norm(v));
        if (smax2 > 0.0) {
          const double damp = cfg.gn_regularizer * smax2;
          sub_weight = ComplexImage(n, n);
          for (std::size_t j = 0; j < sub.size(); ++j) {
            sub_weight[j] = std::conj(sub[j]) / (smax2 + damp) * support[j];
          }
          kt.multiply_accumulate(sub.data(), weight.data(), update.data(), sub.size());
          kt.multiply_accumulate(pupil.data(), sub_weight.data(), update.data(), pupil.size());
          refresh_weight();
        } else {
          kt.multiply_accumulate(sub.data(), weight.data(), update.data(), sub.size());
        }
      } else {
        kt.multiply_accumulate(sub.data(), weight.data(), update.data(), sub.size());
      }
      scatter(spectrum, windows[i], sub);
    }
    if (!std::isfinite(residual)) {
      throw NumericalError("non-finite residual at iteration " + std::to_string(it + 1));
    }
    state.residuals.push_back(residual);
    state.iteration = it + 1;
  }
  if (!all_finite(spectrum)) throw NumericalError("recovered spectrum contains non-finite values");

  kernels::scale(spectrum.span(), 1.0 / to_internal);
  state.hr_spectrum = to_tile_spectrum(spectrum, cfg.backend);
  state.pupil = decimate_pupil(pupil, q);
  if (cfg.bandpass) state.hr_spectrum = bandpass_filter(state.hr_spectrum, geom, stack.leds);
  return state;
}

double synthetic_aperture_radius_pixels(const SystemGeometry& geom,
                                        const std::vector<LedIndex>& lit) {
  return geom.wavenumber() * (geom.objective_na + max_illumination_sine(geom, lit)) /
         geom.spectral_step();
}

ComplexImage bandpass_filter(const ComplexImage& spectrum, const SystemGeometry& geom,
                             const std::vector<LedIndex>& lit) {
  const double radius = synthetic_aperture_radius_pixels(geom, lit);
  ComplexImage out = spectrum;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const double fr = static_cast<double>(signed_frequency(r, out.rows()));
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const double fc = static_cast<double>(signed_frequency(c, out.cols()));
      if (std::hypot(fr, fc) > radius) out(r, c) = Complex{};
    }
  }
  return out;
}

Rendered render_spectrum(const ComplexImage& hr_spectrum) {
  const ComplexImage field = dft2(hr_spectrum, Direction::inverse);
  return {magnitude(field), phase(field)};
}

Rendered render(const ReconState& state) { return render_spectrum(state.hr_spectrum); }

}  // namespace fpm
