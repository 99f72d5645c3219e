#include <numbers>
#include <random>

#include "doctest.h"
#include "fpm/fft.hpp"
#include "fpm/metrics.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fpm;

TEST_CASE("rmse examples") {
  std::mt19937_64 rng(1);
  const RealImage f = oracle::random_real(8, 8, rng);
  CHECK(rmse(f, f) == 0.0);
  CHECK(rmse(RealImage(4, 4, 1.0), RealImage(4, 4, 0.0)) == 1.0);
  RealImage a(1, 2), b(1, 2);
  a(0, 0) = 1.0;
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(rmse(RealImage(2, 3), RealImage(3, 2)), DataError);
}

TEST_CASE("rmse is monotone under orthogonal disturbance") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const RealImage f = oracle::random_real(6, 7, rng), g = oracle::random_real(6, 7, rng);
    RealImage d = oracle::random_real(6, 7, rng);
    // Project out (f - g).
    double dot = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      dot += d[i] * (f[i] - g[i]);
      nn += (f[i] - g[i]) * (f[i] - g[i]);
    }
    RealImage gd = g;
    for (std::size_t i = 0; i < d.size(); ++i) gd[i] += d[i] - dot / nn * (f[i] - g[i]);
    CHECK(rmse(f, gd) >= rmse(f, g));
    CHECK(rms_difference(f, g) == doctest::Approx(rms_difference(g, f)));
  }
}

TEST_CASE("phase alignment") {
  std::mt19937_64 rng(3);
  RealImage truth = oracle::random_real(9, 9, rng);
  RealImage shifted = truth;
  for (double& v : shifted) v += 0.3;
  CHECK(oracle::max_diff(phase_align(shifted, truth), truth) < 1e-12);
  CHECK(oracle::max_diff(phase_align(truth, truth), truth) < 1e-15);

  const RealImage once = phase_align(oracle::random_real(9, 9, rng), truth);
  CHECK(oracle::max_diff(phase_align(once, truth), once) <= 1e-12);
}

TEST_CASE("phase alignment near the wrap point matches a brute-force search") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.05);
  RealImage truth(16, 16), rec(16, 16);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = 0.2 * std::sin(0.3 * static_cast<double>(i));
    rec[i] = wrap_phase(truth[i] + 3.1 + noise(rng));
  }
  const RealImage aligned = phase_align(rec, truth);
  const auto wrapped_rms = [&](double offset) {
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double d = wrap_phase(rec[i] - offset - truth[i]);
      acc += d * d;
    }
    return std::sqrt(acc / truth.size());
  };
  double best = 1e9, best_offset = 0.0;
  for (int k = -20000; k <= 20000; ++k) {
    const double off = std::numbers::pi * k / 20000.0;
    const double v = wrapped_rms(off);
    if (v < best) {
      best = v;
      best_offset = off;
    }
  }
  CHECK(rms_difference(aligned, truth) == doctest::Approx(best).epsilon(1e-3));
  CHECK(std::abs(wrap_phase(best_offset - 3.1)) < 0.05);
}

TEST_CASE("wrap_phase range") {
  CHECK(wrap_phase(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_phase(3.0 * std::numbers::pi / 2.0) == doctest::Approx(-std::numbers::pi / 2.0));
}

TEST_CASE("background phase statistics") {
  RealImage p(10, 10, 0.4);
  CHECK(background_phase_std(p, Region::rectangle(2, 2, 6, 8)) < 1e-15);
  for (std::size_t c = 0; c < 10; ++c) p(3, c) = c % 2 ? 0.25 : -0.25;
  CHECK(background_phase_std(p, Region::segment(3, 0, 3, 9)) == doctest::Approx(0.25));
  CHECK(background_phase_std(p, Region::rectangle(3, 0, 4, 10)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(background_phase_std(p, Region::rectangle(2, 2, 2, 8)), DataError);
  CHECK_THROWS_AS(background_phase_std(p, Region::rectangle(0, 0, 11, 2)), DataError);
  CHECK_THROWS_AS(background_phase_std(p, Region::segment(0, 0, 10, 2)), DataError);
}

TEST_CASE("axis artifact energy") {
  const std::size_t n = 64;
  const double null_ref = axis_artifact_null_reference(n, n);
  // Independent count of axis pixels outside the disk over all pixels outside it.
  const double outside = n * n - oracle::disk_pixel_count(n, 3.0);
  const double axis = 2.0 * (n - 1) - 4.0 * 3.0;
  CHECK(null_ref == doctest::Approx(axis / outside).epsilon(1e-15));
  CHECK(null_ref == doctest::Approx(2.0 * (n + n) / (n * n)).epsilon(0.1));
  CHECK(axis_artifact_energy(ComplexImage(n, n, Complex{1.0, -1.0})) == doctest::Approx(null_ref));

  std::mt19937_64 rng(5);
  const ComplexImage z = oracle::random_complex(n, n, rng);
  ComplexImage scaled = z;
  for (Complex& v : scaled) v *= Complex{3.0, 4.0};
  CHECK(axis_artifact_energy(scaled) == doctest::Approx(axis_artifact_energy(z)).epsilon(1e-13));

  // Horizontal step: all edge energy lands on an axis.
  RealImage step(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = n / 2; q < n; ++q) step(p, q) = 1.0;
  }
  CHECK(axis_artifact_energy(dft2(to_complex(step), Direction::forward)) > 10.0 * null_ref);
  CHECK(axis_artifact_energy(ComplexImage(n, n)) == 0.0);
  CHECK_THROWS_AS(axis_artifact_energy(z, 0.5), ConfigError);
}

TEST_CASE("block consistency") {
  std::mt19937_64 rng(6);
  const RealImage full = oracle::random_real(64, 64, rng);
  const RealImage sub = crop(full, 10, 20, 32, 32);
  CHECK(block_consistency(full, sub, 10, 20) == 0.0);
  RealImage offset = sub;
  for (double& v : offset) v += 0.7;
  CHECK(block_consistency(full, offset, 10, 20) < 1e-12);

  // Disturbance confined to the guard band (ceil(5% of 32) = 2 pixels) is ignored.
  RealImage edged = sub;
  for (std::size_t c = 0; c < 32; ++c) edged(0, c) += 1.0, edged(31, c) -= 1.0;
  CHECK(block_consistency(full, edged, 10, 20) < 1e-12);
  edged(2, 5) += 1.0;
  CHECK(block_consistency(full, edged, 10, 20) > 0.01);

  CHECK_THROWS_AS(block_consistency(full, sub, 40, 0), DataError);
}

TEST_CASE("metric report serializes populated fields only") {
  MetricReport r;
  r.background_phase_std = 0.02;
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.size() == 1);
  CHECK(j["background_phase_std"].get<double>() == 0.02);
  r.rmse_phase = 0.1;
  r.wall_time = 1.5;
  const auto k = nlohmann::json::parse(r.to_json());
  CHECK(k.size() == 3);
  CHECK(k.contains("rmse_phase"));
  CHECK_FALSE(k.contains("rmse_intensity"));
}
