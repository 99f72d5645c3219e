#include "fpm/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "fpm/embedding.hpp"
#include "fpm/fft.hpp"
#include "fpm/kernels.hpp"
#include "fpm/parallel.hpp"
#include "fpm/resample.hpp"

namespace fpm {

namespace {

// Constant images normalize to 1.
RealImage normalize_unit(const RealImage& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double range = *hi - *lo;
  RealImage out(x.rows(), x.cols(), 1.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - *lo) / range;
  }
  return out;
}

RealImage affine(const RealImage& unit, double lo, double hi) {
  RealImage out(unit.rows(), unit.cols());
  for (std::size_t i = 0; i < unit.size(); ++i) out[i] = lo + (hi - lo) * unit[i];
  return out;
}

RealImage fit(const RealImage& src, std::size_t n) {
  if (src.rows() == n && src.cols() == n) return src;
  return resample(src, n, n, Interpolation::bicubic);
}

const RealImage& require_source(const std::optional<RealImage>& src, const char* what) {
  if (!src || src->empty()) throw DataError(std::string("ground truth needs a ") + what);
  if (!all_finite(*src)) throw DataError(std::string(what) + " contains non-finite samples");
  return *src;
}

void add_noise(RealImage& img, const NoiseSpec& noise, std::mt19937_64& rng) {
  switch (noise.kind) {
    case NoiseSpec::Kind::none:
      return;
    case NoiseSpec::Kind::gaussian: {
      std::normal_distribution<double> dist(0.0, noise.sigma);
      for (double& v : img) v = std::max(0.0, v + dist(rng));
      return;
    }
    case NoiseSpec::Kind::poisson:
      for (double& v : img) {
        std::poisson_distribution<long long> dist(v * noise.photon_scale);
        v = static_cast<double>(dist(rng)) / noise.photon_scale;
      }
      return;
  }
}

void quantize(RealImage& img, unsigned bits) {
  const double levels = std::ldexp(1.0, static_cast<int>(bits)) - 1.0;
  for (double& v : img) v = std::round(std::clamp(v, 0.0, 1.0) * levels) / levels;
}

}  // namespace

GroundTruth GroundTruth::center_crop(std::size_t rows, std::size_t cols) const {
  if (rows > amplitude.rows() || cols > amplitude.cols()) {
    throw DataError("center_crop larger than the ground truth");
  }
  const std::size_t r0 = (amplitude.rows() - rows) / 2;
  const std::size_t c0 = (amplitude.cols() - cols) / 2;
  return {crop(amplitude, r0, c0, rows, cols), crop(phase, r0, c0, rows, cols)};
}

RealImage smooth_noise(std::size_t n, double correlation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexImage w(n, n);
  for (auto& v : w) v = dist(rng);
  dft2_inplace(w, Direction::forward);
  const double width = static_cast<double>(n) / (2.0 * std::numbers::pi * correlation);
  const double inv = 1.0 / (2.0 * width * width);
  for (std::size_t r = 0; r < n; ++r) {
    const double fr = static_cast<double>(signed_frequency(r, n));
    for (std::size_t c = 0; c < n; ++c) {
      const double fc = static_cast<double>(signed_frequency(c, n));
      w(r, c) *= std::exp(-(fr * fr + fc * fc) * inv);
    }
  }
  dft2_inplace(w, Direction::inverse);
  return normalize_unit(real_part(w));
}

GroundTruth make_ground_truth(const TruthOptions& opts) {
  const std::size_t n = opts.hr_size;
  if (n < 2) throw ConfigError("truth.hr_size must be at least 2");
  if (!(opts.amplitude_floor >= 0.0 && opts.amplitude_floor <= 1.0)) {
    throw ConfigError("truth.amplitude_floor must lie in [0, 1]");
  }
  GroundTruth t{RealImage(n, n, 1.0), RealImage(n, n, 0.0)};
  switch (opts.kind) {
    case TruthKind::flat:
      break;
    case TruthKind::phase_only: {
      const RealImage ph = fit(require_source(opts.phase_source, "phase source image"), n);
      t.phase = opts.phase_verbatim ? ph : affine(normalize_unit(ph), opts.phase_min, opts.phase_max);
      break;
    }
    case TruthKind::two_image: {
      const RealImage a = fit(require_source(opts.amplitude_source, "amplitude source image"), n);
      const RealImage p = fit(require_source(opts.phase_source, "phase source image"), n);
      t.amplitude = affine(normalize_unit(a), opts.amplitude_floor, 1.0);
      t.phase = affine(normalize_unit(p), opts.phase_min, opts.phase_max);
      break;
    }
    case TruthKind::texture:
      if (!(opts.amplitude_correlation > 0.0) || !(opts.phase_correlation > 0.0)) {
        throw ConfigError("truth correlation lengths must be positive");
      }
      t.amplitude = affine(smooth_noise(n, opts.amplitude_correlation, opts.seed),
                           opts.amplitude_floor, 1.0);
      t.phase = affine(smooth_noise(n, opts.phase_correlation, opts.seed + 1), opts.phase_min,
                       opts.phase_max);
      break;
  }
  return t;
}

std::size_t truth_upsampling(const GroundTruth& truth, const SystemGeometry& geom,
                             std::size_t field_margin) {
  if (field_margin == 0) throw ConfigError("field_margin must be at least 1");
  const std::size_t side = truth.amplitude.rows();
  const std::size_t unit = field_margin * geom.lr_size;
  if (truth.amplitude.cols() != side || !truth.amplitude.same_shape(truth.phase)) {
    throw DataError("ground truth must be square with matching amplitude and phase");
  }
  if (side % unit != 0 || side / unit < 1) {
    throw DataError("ground truth side " + std::to_string(side) +
                    " is not a multiple of field_margin * lr_size = " + std::to_string(unit));
  }
  return side / unit;
}

LrStack simulate_stack(const GroundTruth& truth, const SystemGeometry& geom,
                       const std::vector<LedIndex>& lit, const ErrorModelSpec& err,
                       const SimOptions& opts) {
  geom.validate();
  if (lit.empty()) throw ConfigError("simulate_stack: no lit LEDs");
  err.validate(lit.size());
  const std::size_t margin = opts.field_margin;
  truth_upsampling(truth, geom, margin);
  if (!all_finite(truth.amplitude) || !all_finite(truth.phase)) {
    throw DataError("ground truth contains non-finite samples");
  }

  const std::size_t big = truth.amplitude.rows();
  const std::size_t l = geom.lr_size;
  const std::size_t n = margin * l;
  const double step = geom.spectral_step();
  const ComplexImage spectrum = dft2(truth.field(), Direction::forward);

  PupilSpec field_pupil = err.pupil;
  if (field_pupil.aberration_phase) {
    if (field_pupil.aberration_phase->rows() != l || field_pupil.aberration_phase->cols() != l) {
      throw ConfigError("pupil.aberration_phase must be " + std::to_string(l) + "x" +
                        std::to_string(l));
    }
    if (margin > 1) field_pupil.aberration_phase = refine_pupil_phase(*field_pupil.aberration_phase, margin);
  }
  const ComplexImage pupil = pupil_mask(geom, n, step / static_cast<double>(margin), field_pupil);

  // Unitary transforms carry a factor big/n from a big-grid spectrum to an
  // n-grid field; undoing it makes a flat unit object image to exactly 1.
  const double field_scale = static_cast<double>(n) / static_cast<double>(big);
  const double intensity_scale = field_scale * field_scale;
  const std::size_t offset = (n - l) / 2;

  // Windows are resolved up front so geometry errors surface before any work.
  std::vector<SpectralWindow> windows;
  windows.reserve(lit.size());
  for (std::size_t i = 0; i < lit.size(); ++i) {
    const Vec2 k = wavevector_for_led(geom, lit[i].row, lit[i].col);
    const Vec2 dk = err.offset(i);
    PixelShift s = to_pixel_shift({k.x + dk.x, k.y + dk.y}, step);
    s.x *= static_cast<long>(margin);
    s.y *= static_cast<long>(margin);
    windows.push_back(spectral_window(big, big, n, s));
  }

  LrStack stack{std::vector<RealImage>(lit.size()), lit, geom};
  const auto& kt = kernels::active();
  parallel_for(lit.size(), [&](std::size_t i) {
    ComplexImage sub;
    gather(spectrum, windows[i], sub);
    kt.multiply(sub.data(), pupil.data(), sub.data(), sub.size());
    dft2_inplace(sub, Direction::inverse);
    RealImage img(l, l);
    const double scale = intensity_scale * err.weight(i);
    for (std::size_t r = 0; r < l; ++r) {
      for (std::size_t c = 0; c < l; ++c) img(r, c) = std::norm(sub(offset + r, offset + c)) * scale;
    }
    if (err.noise.kind != NoiseSpec::Kind::none) {
      std::seed_seq seq{static_cast<std::uint64_t>(err.seed), static_cast<std::uint64_t>(i)};
      std::mt19937_64 rng(seq);
      add_noise(img, err.noise, rng);
    }
    if (err.quantize_bits > 0) quantize(img, err.quantize_bits);
    stack.images[i] = std::move(img);
  });
  return stack;
}

std::size_t on_axis_index(const LrStack& stack) {
  if (stack.leds.empty()) throw DataError("empty LR stack");
  std::size_t best = 0;
  double best_k = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stack.leds.size(); ++i) {
    const Vec2 k = wavevector_for_led(stack.geometry, stack.leds[i].row, stack.leds[i].col);
    const double mag = std::hypot(k.x, k.y);
    const auto key = [&](std::size_t j) { return std::pair(stack.leds[j].row, stack.leds[j].col); };
    if (mag < best_k - 1e-9 * stack.geometry.wavenumber() ||
        (std::abs(mag - best_k) <= 1e-9 * stack.geometry.wavenumber() && key(i) < key(best))) {
      best = i;
      best_k = std::min(best_k, mag);
    }
  }
  return best;
}

}  // namespace fpm
