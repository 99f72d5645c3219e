#include <cstdlib>
#include <cstring>
#include <random>

#include "doctest.h"
#include "fpm/kernels.hpp"
#include "fpm/parallel.hpp"
#include "oracles.hpp"

using namespace fpm;
using kernels::KernelTable;

namespace {

std::vector<Complex> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<Complex> v(n);
  for (Complex& z : v) z = {d(rng), d(rng)};
  return v;
}

double max_err(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Odd lengths exercise the scalar tails of the vector loops.
constexpr std::size_t kLengths[] = {0, 1, 2, 3, 7, 16, 33, 1000};

}  // namespace

TEST_CASE("scalar kernels against plain loops") {
  const KernelTable& t = kernels::scalar_table();
  std::mt19937_64 rng(1);
  const auto a = random_vec(9, rng), b = random_vec(9, rng);
  std::vector<Complex> out(9);
  t.multiply(a.data(), b.data(), out.data(), 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(out[i] - a[i] * b[i]) < 1e-15);

  std::vector<double> amp{0.0, 1.0, 2.0};
  std::vector<Complex> psi{{3.0, 4.0}, {0.0, 0.0}, {0.0, -1.0}}, res(3);
  const double r = t.amplitude_replace(psi.data(), amp.data(), res.data(), 3, 1e-12);
  CHECK(std::abs(res[0]) == doctest::Approx(0.0));
  CHECK(std::abs(res[1]) == doctest::Approx(0.0));
  CHECK(std::abs(res[2] - Complex(0.0, -2.0)) < 1e-15);
  CHECK(r == doctest::Approx(25.0 + 1.0 + 1.0));
}

TEST_CASE("simd kernels match the scalar reference") {
  const KernelTable* simd = kernels::avx2_table();
  if (!simd) {
    MESSAGE("AVX2 unavailable; nothing to compare");
    return;
  }
  const KernelTable& ref = kernels::scalar_table();
  std::mt19937_64 rng(2);
  for (std::size_t n : kLengths) {
    const auto a = random_vec(n, rng), b = random_vec(n, rng), c = random_vec(n, rng);
    std::vector<Complex> x = a, y = a;
    ref.scale(x.data(), n, 0.37);
    simd->scale(y.data(), n, 0.37);
    CHECK(max_err(x, y) <= 1e-15);

    std::vector<Complex> m1(n), m2(n);
    ref.multiply(a.data(), b.data(), m1.data(), n);
    simd->multiply(a.data(), b.data(), m2.data(), n);
    CHECK(max_err(m1, m2) <= 1e-14);

    x = c;
    y = c;
    ref.multiply_accumulate(x.data(), a.data(), b.data(), n);
    simd->multiply_accumulate(y.data(), a.data(), b.data(), n);
    CHECK(max_err(x, y) <= 1e-14);

    std::vector<double> s1(n), s2(n);
    ref.magnitude_squared(a.data(), s1.data(), n);
    simd->magnitude_squared(a.data(), s2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s1[i] - s2[i]) <= 1e-14);

    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) amp[i] = std::abs(b[i]);
    std::vector<Complex> psi = a;
    if (n > 2) psi[1] = 0.0;
    const double r1 = ref.amplitude_replace(psi.data(), amp.data(), m1.data(), n, 1e-9);
    const double r2 = simd->amplitude_replace(psi.data(), amp.data(), m2.data(), n, 1e-9);
    CHECK(max_err(m1, m2) <= 1e-13);
    CHECK(std::abs(r1 - r2) <= 1e-12 * (1.0 + r1));

    std::vector<double> inv_k(n);
    for (std::size_t i = 0; i < n; ++i) inv_k[i] = 1.0 / (1.0 + i);
    x = c;
    y = c;
    ref.border_correction_row(x.data(), a.data(), {0.3, -0.2}, {1.1, 0.4}, b.data(), inv_k.data(), n,
                              -1.0);
    simd->border_correction_row(y.data(), a.data(), {0.3, -0.2}, {1.1, 0.4}, b.data(),
                                inv_k.data(), n, -1.0);
    CHECK(max_err(x, y) <= 1e-14);
  }
}

TEST_CASE("active table honours FPM_SIMD") {
  const char* env = std::getenv("FPM_SIMD");
  const KernelTable& t = kernels::active();
  if (env && std::strcmp(env, "scalar") == 0) {
    CHECK(t.isa == kernels::Isa::scalar);
  } else if (kernels::avx2_table()) {
    CHECK(t.isa == kernels::Isa::avx2);
  } else {
    CHECK(t.isa == kernels::Isa::scalar);
  }
  CHECK(std::string(kernels::isa_name(t.isa)).size() > 0);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(500, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(worker_count() >= 1);
  CHECK_THROWS_AS(parallel_for(10,
                               [](std::size_t i) {
                                 if (i == 7) throw DataError("seven");
                               }),
                  DataError);
}
