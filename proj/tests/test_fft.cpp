#include <random>

#include "doctest.h"
#include "fpm/fft.hpp"
#include "oracles.hpp"

using namespace fpm;

TEST_CASE("constant image concentrates at DC") {
  const double c = 2.5;
  const ComplexImage x(6, 10, c);
  const ComplexImage s = dft2(x, Direction::forward);
  CHECK(std::abs(s(0, 0) - Complex(std::sqrt(60.0) * c, 0.0)) < 1e-12);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-12);
}

TEST_CASE("unit impulse gives a flat spectrum") {
  ComplexImage x(8, 4);
  x(0, 0) = 1.0;
  const ComplexImage s = dft2(x, Direction::forward);
  for (const Complex& v : s) CHECK(std::abs(v - Complex(1.0 / std::sqrt(32.0), 0.0)) < 1e-14);
}

TEST_CASE("matches the direct summation") {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair{8, 8}, {5, 7}, {2, 3}, {6, 4}}) {
    const ComplexImage x = oracle::random_complex(m, n, rng);
    CHECK(oracle::max_diff(dft2(x, Direction::forward), oracle::naive_dft2(x)) < 1e-10);
    CHECK(oracle::max_diff(dft2(x, Direction::inverse), oracle::naive_dft2(x, true)) < 1e-10);
  }
}

TEST_CASE("round trip and Parseval over sizes 2..64") {
  std::mt19937_64 rng(3);
  for (std::size_t m = 2; m <= 64; m += 7) {
    for (std::size_t n : {2ul, 3ul, 16ul, 31ul, 64ul}) {
      const ComplexImage x = oracle::random_complex(m, n, rng);
      const ComplexImage s = dft2(x, Direction::forward);
      CHECK(oracle::rel_diff(dft2(s, Direction::inverse), x) < 1e-12);
      const double ex = l2_norm(x), es = l2_norm(s);
      CHECK(std::abs(ex * ex - es * es) <= 1e-10 * ex * ex);
    }
  }
}

TEST_CASE("circular shift becomes a linear phase") {
  const std::size_t m = 8, n = 6, dr = 3, dc = 2;
  ComplexImage a(m, n), b(m, n);
  a(0, 0) = 1.0;
  b(dr, dc) = 1.0;
  const ComplexImage sa = dft2(a, Direction::forward);
  const ComplexImage sb = dft2(b, Direction::forward);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const double ang = -2.0 * std::numbers::pi *
                         (static_cast<double>(k * dr) / m + static_cast<double>(l * dc) / n);
      CHECK(std::abs(sb(k, l) - sa(k, l) * std::polar(1.0, ang)) < 1e-13);
    }
  }
}

TEST_CASE("1D transform is unnormalized") {
  std::vector<Complex> in{1.0, 2.0, 3.0, 4.0}, out(4);
  dft1(in, out, Direction::forward);
  CHECK(std::abs(out[0] - Complex(10.0, 0.0)) < 1e-12);
  CHECK(std::abs(out[2] - Complex(-2.0, 0.0)) < 1e-12);
}
