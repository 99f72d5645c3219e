#include <numbers>

#include "doctest.h"
#include "fpm/embedding.hpp"
#include "fpm/geometry.hpp"
#include "fpm/resample.hpp"
#include "oracles.hpp"

using namespace fpm;

namespace {

SystemGeometry reference_geometry() {
  SystemGeometry g;
  g.led_rows = 11;
  g.led_cols = 11;
  g.led_pitch = 4e-3;
  g.led_to_sample = 76e-3;
  g.wavelength = 630e-9;
  g.objective_na = 0.1;
  g.camera_pixel = 6.5e-6;
  g.magnification = 4.0;
  g.lr_size = 128;
  return g;
}

}  // namespace

TEST_CASE("center LED is on axis") {
  const Vec2 k = wavevector_for_led(reference_geometry(), 5, 5);
  CHECK(k.x == 0.0);
  CHECK(k.y == 0.0);
}

TEST_CASE("LED four millimetres off axis") {
  const auto g = reference_geometry();
  const Vec2 k = wavevector_for_led(g, 5, 6);
  const double expect = -(2.0 * std::numbers::pi / 6.3e-7) * (0.004 / std::hypot(0.004, 0.076));
  CHECK(k.x == doctest::Approx(expect).epsilon(1e-14));
  CHECK(k.x == doctest::Approx(-5.242e5).epsilon(1e-3));
  CHECK(k.y == 0.0);
}

TEST_CASE("wavevectors are antisymmetric and grow with distance") {
  const auto g = reference_geometry();
  for (std::size_t r = 0; r < 11; ++r) {
    for (std::size_t c = 0; c < 11; ++c) {
      const Vec2 a = wavevector_for_led(g, r, c), b = wavevector_for_led(g, 10 - r, 10 - c);
      CHECK(a.x == -b.x);
      CHECK(a.y == -b.y);
      CHECK(std::hypot(a.x, a.y) < g.wavenumber());
    }
  }
  double prev = -1.0;
  for (std::size_t c = 5; c < 11; ++c) {
    const Vec2 k = wavevector_for_led(g, 5, c);
    CHECK(std::hypot(k.x, k.y) > prev);
    prev = std::hypot(k.x, k.y);
  }
  CHECK_THROWS_AS(wavevector_for_led(g, 11, 0), ConfigError);
}

TEST_CASE("even arrays are offset by half a pitch") {
  auto g = reference_geometry();
  g.led_rows = g.led_cols = 32;
  const Vec2 a = wavevector_for_led(g, 15, 16), b = wavevector_for_led(g, 16, 15);
  CHECK(a.x == -b.x);
  CHECK(a.y == -b.y);
  CHECK(a.x != 0.0);
  const auto window = center_window(g, 15, 15);
  CHECK(window.size() == 225);
  CHECK(window.front() == LedIndex{8, 8});
  CHECK(window.back() == LedIndex{22, 22});
  CHECK_THROWS_AS(center_window(g, 33, 1), ConfigError);
}

TEST_CASE("geometry validation") {
  auto g = reference_geometry();
  CHECK_NOTHROW(g.validate());
  SUBCASE("nyquist boundary is accepted") {
    g.camera_pixel = g.magnification * g.wavelength / (2.0 * g.objective_na);
    CHECK_NOTHROW(g.validate());
    g.camera_pixel *= 1.0 + 1e-9;
    CHECK_THROWS_AS(g.validate(), ConfigError);
  }
  SUBCASE("bad fields name themselves") {
    g.wavelength = -1.0;
    try {
      g.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("wavelength") != std::string::npos);
    }
  }
  SUBCASE("numerical aperture range") {
    g.objective_na = 1.0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
  }
}

TEST_CASE("ideal pupil is a binary disk") {
  const auto g = reference_geometry();
  const std::size_t n = 128;
  const ComplexImage p = pupil_mask(g, n, g.spectral_step(), {});
  const double r = g.pupil_radius_pixels();
  std::size_t inside = 0;
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const double fr = signed_frequency(row, n), fc = signed_frequency(col, n);
      const bool in = std::hypot(fr, fc) * g.spectral_step() <= g.wavenumber() * g.objective_na;
      CHECK(p(row, col) == Complex(in ? 1.0 : 0.0, 0.0));
      inside += in;
      // Hermitian about DC.
      CHECK(p(row, col) == std::conj(p((n - row) % n, (n - col) % n)));
    }
  }
  CHECK(inside == oracle::disk_pixel_count(n, r));
  const double frac = static_cast<double>(inside) / (n * n);
  CHECK(frac == doctest::Approx(std::numbers::pi * r * r / (n * n)).epsilon(0.03));
}

TEST_CASE("pupil phase terms") {
  const auto g = reference_geometry();
  PupilSpec spec;
  spec.defocus = 5e-6;
  const ComplexImage p = pupil_mask(g, 64, g.spectral_step(), spec);
  const double k0 = g.wavenumber();
  CHECK(std::abs(p(0, 0) - std::polar(1.0, 5e-6 * k0)) < 1e-12);
  for (const Complex& v : p) CHECK((v == Complex{} || std::abs(std::abs(v) - 1.0) < 1e-12));

  spec = {};
  spec.aberration_phase = RealImage(32, 32, 0.1);
  CHECK_THROWS_AS(pupil_mask(g, 64, g.spectral_step(), spec), ConfigError);
  CHECK_THROWS_AS(pupil_mask(g, 64, 0.0, {}), ConfigError);
}

TEST_CASE("upsampling factor") {
  auto g = reference_geometry();
  const auto lit = all_leds(g);
  // Frozen: synthetic aperture of about 148 spectral pixels over a 64 pixel half-width.
  CHECK(upsampling_factor(g, lit) == 3);
  CHECK(upsampling_factor(g, {LedIndex{5, 5}}) == 2);
  g.objective_na = 0.5;
  g.camera_pixel = 1e-6;
  CHECK(upsampling_factor(g, {LedIndex{5, 5}}) == 2);

  // At a fixed object pixel, doubling the tile doubles both the aperture and the grid.
  g = reference_geometry();
  g.lr_size = 256;
  CHECK(upsampling_factor(g, lit) == 3);
}

TEST_CASE("pixel shifts round to the nearest bin") {
  const PixelShift s = to_pixel_shift({2.49, -3.51}, 1.0);
  CHECK(s.x == 2);
  CHECK(s.y == -4);
}

TEST_CASE("refined pupil phase follows the coarse bins") {
  RealImage coarse(4, 4);
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = static_cast<double>(i);
  const RealImage fine = refine_pupil_phase(coarse, 2);
  CHECK(fine.rows() == 8);
  CHECK(fine(0, 0) == coarse(0, 0));
  CHECK(fine(2, 2) == coarse(1, 1));
  CHECK(fine(6, 6) == coarse(3, 3));
  CHECK(refine_pupil_phase(coarse, 1) == coarse);
}

TEST_CASE("error model validation") {
  ErrorModelSpec e;
  CHECK_NOTHROW(e.validate(3));
  CHECK(e.weight(2) == 1.0);
  e.weights = {1.0, 2.0};
  CHECK_THROWS_AS(e.validate(3), ConfigError);
  e.weights = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(e.validate(3), ConfigError);
  e.weights.clear();
  e.quantize_bits = 17;
  CHECK_THROWS_AS(e.validate(3), ConfigError);
}

TEST_CASE("spectral windows gather and scatter") {
  const SpectralWindow w = spectral_window(12, 12, 4, {3, -2});
  CHECK(w.cols == std::vector<std::size_t>{3, 4, 1, 2});
  CHECK(w.rows == std::vector<std::size_t>{10, 11, 8, 9});
  ComplexImage hr(12, 12);
  for (std::size_t i = 0; i < hr.size(); ++i) hr[i] = static_cast<double>(i);
  ComplexImage lr(4, 4);
  gather(hr, w, lr);
  CHECK(lr(0, 0) == hr(10, 3));
  ComplexImage back(12, 12);
  scatter(back, w, lr);
  CHECK(back(8, 1) == hr(8, 1));
  CHECK(back(0, 0) == Complex{});
  CHECK_THROWS_AS(spectral_window(12, 12, 4, {6, 0}), DataError);
}

TEST_CASE("resampling") {
  RealImage c(3, 5, 0.75);
  for (auto mode : {Interpolation::nearest, Interpolation::bilinear, Interpolation::bicubic}) {
    const RealImage up = resample(c, 7, 11, mode);
    CHECK(up.rows() == 7);
    CHECK(oracle::max_diff(up, RealImage(7, 11, 0.75)) < 1e-14);
    CHECK(resample(c, 3, 5, mode) == c);
  }
  RealImage ramp(1, 4);
  for (std::size_t q = 0; q < 4; ++q) ramp(0, q) = static_cast<double>(q);
  const RealImage up = resample(ramp, 1, 8, Interpolation::bilinear);
  CHECK(up(0, 2) == doctest::Approx(0.75));
  CHECK(up(0, 0) == doctest::Approx(0.0));
  CHECK(up(0, 7) == doctest::Approx(3.0));
}
