#include <numbers>

#include "doctest.h"
#include "fpm/fft.hpp"
#include "fpm/forward_sim.hpp"
#include "oracles.hpp"

using namespace fpm;

namespace {

SystemGeometry small_geometry() {
  SystemGeometry g;
  g.led_rows = 11;
  g.led_cols = 11;
  g.led_pitch = 4e-3;
  g.led_to_sample = 76e-3;
  g.wavelength = 630e-9;
  g.objective_na = 0.1;
  g.camera_pixel = 6.5e-6;
  g.magnification = 4.0;
  g.lr_size = 32;
  return g;
}

GroundTruth flat_truth(std::size_t n) {
  TruthOptions t;
  t.kind = TruthKind::flat;
  t.hr_size = n;
  return make_ground_truth(t);
}

GroundTruth texture_truth(std::size_t n, std::uint64_t seed) {
  TruthOptions t;
  t.kind = TruthKind::texture;
  t.hr_size = n;
  t.seed = seed;
  return make_ground_truth(t);
}

// Tile-sized model written out directly: crop the unitary HR spectrum around
// the pixel shift, apply an ideal disk pupil, inverse transform, square.
RealImage oracle_image(const GroundTruth& truth, const SystemGeometry& g, long sx, long sy) {
  const std::size_t big = truth.amplitude.rows(), l = g.lr_size;
  const ComplexImage spec = dft2(truth.field(), Direction::forward);
  const double cutoff = g.wavenumber() * g.objective_na / g.spectral_step();
  ComplexImage sub(l, l);
  for (std::size_t r = 0; r < l; ++r) {
    for (std::size_t c = 0; c < l; ++c) {
      const long fr = signed_frequency(r, l), fc = signed_frequency(c, l);
      if (std::hypot(static_cast<double>(fr), static_cast<double>(fc)) > cutoff) continue;
      const long b = static_cast<long>(big);
      sub(r, c) = spec(static_cast<std::size_t>(((fr + sy) % b + b) % b),
                       static_cast<std::size_t>(((fc + sx) % b + b) % b));
    }
  }
  const ComplexImage field = dft2(sub, Direction::inverse);
  RealImage out(l, l);
  const double scale = static_cast<double>(l * l) / static_cast<double>(big * big);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(field[i]) * scale;
  return out;
}

}  // namespace

TEST_CASE("ground truth kinds") {
  const GroundTruth flat = flat_truth(16);
  CHECK(flat.amplitude == RealImage(16, 16, 1.0));
  CHECK(flat.phase == RealImage(16, 16, 0.0));

  RealImage map(16, 16);
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = 0.01 * static_cast<double>(i);
  TruthOptions t;
  t.kind = TruthKind::phase_only;
  t.hr_size = 16;
  t.phase_source = map;
  const GroundTruth po = make_ground_truth(t);
  CHECK(po.amplitude == RealImage(16, 16, 1.0));
  CHECK(po.phase == map);

  t.kind = TruthKind::two_image;
  t.amplitude_source = map;
  t.phase_verbatim = false;
  const GroundTruth two = make_ground_truth(t);
  // Identical sources give amplitude and phase that are affine images of each other.
  for (std::size_t i = 1; i < map.size(); ++i) {
    const double da = two.amplitude[i] - two.amplitude[0];
    const double dp = two.phase[i] - two.phase[0];
    CHECK(dp == doctest::Approx(da * (t.phase_max - t.phase_min) / (1.0 - t.amplitude_floor)));
  }

  const GroundTruth tex = texture_truth(32, 9);
  for (double a : tex.amplitude) CHECK((a >= t.amplitude_floor - 1e-15 && a <= 1.0 + 1e-15));
  CHECK(tex.amplitude == texture_truth(32, 9).amplitude);
  CHECK_FALSE(tex.amplitude == texture_truth(32, 10).amplitude);
}

TEST_CASE("flat object images to one on axis and to dark off the pupil") {
  const auto g = small_geometry();
  const std::size_t s = upsampling_factor(g, all_leds(g));
  for (std::size_t margin : {1ul, 2ul}) {
    const GroundTruth truth = flat_truth(margin * s * g.lr_size);
    SimOptions opts;
    opts.field_margin = margin;
    const LrStack st = simulate_stack(truth, g, {LedIndex{5, 5}, LedIndex{5, 10}}, {}, opts);
    CHECK(oracle::max_diff(st.images[0], RealImage(32, 32, 1.0)) <= 1e-10);
    const Vec2 k = wavevector_for_led(g, 5, 10);
    CHECK(std::hypot(k.x, k.y) > 2.0 * g.wavenumber() * g.objective_na);
    CHECK(max_abs(st.images[1]) <= 1e-20);
  }
}

TEST_CASE("tile-sized simulation matches the direct model") {
  const auto g = small_geometry();
  const auto lit = all_leds(g);
  const std::size_t s = upsampling_factor(g, lit);
  const GroundTruth truth = texture_truth(s * g.lr_size, 4);
  const LrStack st = simulate_stack(truth, g, lit, {});
  REQUIRE(st.images.size() == 121);
  for (std::size_t i = 0; i < lit.size(); i += 13) {
    const PixelShift p = to_pixel_shift(wavevector_for_led(g, lit[i].row, lit[i].col), g.spectral_step());
    CHECK(oracle::max_diff(st.images[i], oracle_image(truth, g, p.x, p.y)) <= 1e-12);
  }
}

TEST_CASE("error model terms") {
  const auto g = small_geometry();
  const auto lit = center_window(g, 3, 3);
  const std::size_t s = upsampling_factor(g, all_leds(g));
  const GroundTruth truth = texture_truth(s * g.lr_size, 2);
  const LrStack ideal = simulate_stack(truth, g, lit, {});

  SUBCASE("explicit neutral terms are bit-identical") {
    ErrorModelSpec e;
    e.weights.assign(lit.size(), 1.0);
    e.wavevector_offsets.assign(lit.size(), Vec2{});
    e.seed = 99;
    const LrStack st = simulate_stack(truth, g, lit, e);
    for (std::size_t i = 0; i < lit.size(); ++i) CHECK(st.images[i] == ideal.images[i]);
  }
  SUBCASE("weight two doubles every pixel") {
    ErrorModelSpec e;
    e.weights.assign(lit.size(), 1.0);
    e.weights[4] = 2.0;
    const LrStack st = simulate_stack(truth, g, lit, e);
    for (std::size_t p = 0; p < st.images[4].size(); ++p) {
      CHECK(st.images[4][p] == 2.0 * ideal.images[4][p]);
    }
    CHECK(st.images[3] == ideal.images[3]);
  }
  SUBCASE("one spectral pixel of offset moves the crop by one bin") {
    ErrorModelSpec e;
    e.wavevector_offsets.assign(lit.size(), Vec2{});
    e.wavevector_offsets[4] = {g.spectral_step(), 0.0};
    e.wavevector_offsets[0] = {0.0, -g.spectral_step()};
    const LrStack st = simulate_stack(truth, g, lit, e);
    const PixelShift p4 = to_pixel_shift(wavevector_for_led(g, lit[4].row, lit[4].col), g.spectral_step());
    const PixelShift p0 = to_pixel_shift(wavevector_for_led(g, lit[0].row, lit[0].col), g.spectral_step());
    CHECK(oracle::max_diff(st.images[4], oracle_image(truth, g, p4.x + 1, p4.y)) <= 1e-12);
    CHECK(oracle::max_diff(st.images[0], oracle_image(truth, g, p0.x, p0.y - 1)) <= 1e-12);
  }
}

TEST_CASE("gaussian noise variance") {
  const auto g = small_geometry();
  const std::size_t s = upsampling_factor(g, all_leds(g));
  const GroundTruth truth = flat_truth(s * g.lr_size);
  const auto lit = center_window(g, 3, 3);
  ErrorModelSpec e;
  e.noise.kind = NoiseSpec::Kind::gaussian;
  e.noise.sigma = 0.01;
  e.seed = 3;
  const LrStack noisy = simulate_stack(truth, g, lit, e);
  const LrStack clean = simulate_stack(truth, g, lit, {});
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    for (std::size_t p = 0; p < clean.images[i].size(); ++p) {
      const double d = noisy.images[i][p] - clean.images[i][p];
      acc += d * d;
      ++count;
    }
  }
  CHECK(acc / count == doctest::Approx(1e-4).epsilon(0.1));
  const LrStack again = simulate_stack(truth, g, lit, e);
  for (std::size_t i = 0; i < lit.size(); ++i) CHECK(again.images[i] == noisy.images[i]);

  e.noise.kind = NoiseSpec::Kind::poisson;
  e.noise.photon_scale = 1e4;
  const LrStack shot = simulate_stack(truth, g, lit, e);
  for (const auto& img : shot.images) {
    for (double v : img) CHECK(v >= 0.0);
  }
}

TEST_CASE("quantization") {
  const auto g = small_geometry();
  const std::size_t s = upsampling_factor(g, all_leds(g));
  ErrorModelSpec e;
  e.quantize_bits = 8;
  const LrStack st = simulate_stack(texture_truth(s * g.lr_size, 1), g, center_window(g, 3, 3), e);
  for (const auto& img : st.images) {
    for (double v : img) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(std::abs(v * 255.0 - std::round(v * 255.0)) < 1e-9);
    }
  }
}

TEST_CASE("brightfield to darkfield energy ratio") {
  const auto g = small_geometry();
  const auto lit = all_leds(g);
  const std::size_t s = upsampling_factor(g, lit);
  const LrStack st = simulate_stack(flat_truth(s * g.lr_size), g, lit, {});
  double bright = 1e300, dark = 0.0;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    const Vec2 k = wavevector_for_led(g, lit[i].row, lit[i].col);
    const double m = mean(st.images[i]);
    if (std::hypot(k.x, k.y) < g.wavenumber() * g.objective_na) {
      bright = std::min(bright, m);
    } else {
      dark = std::max(dark, m);
    }
  }
  CHECK(bright > 1e3 * std::max(dark, 1e-300));
  CHECK(on_axis_index(st) == 60);
}

TEST_CASE("simulation contract errors") {
  const auto g = small_geometry();
  CHECK_THROWS_AS(simulate_stack(flat_truth(64 + 1), g, {LedIndex{5, 5}}, {}), DataError);
  CHECK_THROWS_AS(simulate_stack(flat_truth(64), g, {}, {}), ConfigError);
  // A 2x grid cannot hold the corner LED's sub-spectrum.
  CHECK_THROWS_AS(simulate_stack(flat_truth(64), g, {LedIndex{0, 0}}, {}), DataError);
  CHECK(truth_upsampling(flat_truth(192), g, 2) == 3);
}

TEST_CASE("smooth noise") {
  const RealImage a = smooth_noise(64, 3.0, 8);
  double lo = 1e9, hi = -1e9;
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));
  CHECK(a == smooth_noise(64, 3.0, 8));
}
