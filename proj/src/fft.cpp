#include "fpm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "fpm/kernels.hpp"

namespace fpm {
namespace {

// FFTW's planner is not re-entrant; execution of an existing plan on new
// arrays is. Plans are created once per shape under this lock and never freed.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using PlanKey = std::tuple<int, std::size_t, std::size_t, int>;  // rank, n0, n1, sign

fftw_plan get_plan(int rank, std::size_t n0, std::size_t n1, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  const PlanKey key{rank, n0, n1, sign};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const std::size_t n = rank == 2 ? n0 * n1 : n0;
  fftw_complex* scratch = fftw_alloc_complex(n);
  fftw_plan plan = nullptr;
  // Estimate mode keeps results bit-reproducible from run to run.
  if (rank == 2) {
    plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), scratch, scratch, sign,
                            FFTW_ESTIMATE);
  } else {
    fftw_complex* out = fftw_alloc_complex(n);
    plan = fftw_plan_dft_1d(static_cast<int>(n0), scratch, out, sign,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(out);
  }
  fftw_free(scratch);
  if (!plan) throw NumericalError("FFTW failed to create a plan");
  cache.emplace(key, plan);
  return plan;
}

int fftw_sign(Direction dir) { return dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void dft2_inplace(ComplexImage& img, Direction dir) {
  if (img.empty()) return;
  fftw_plan plan = get_plan(2, img.rows(), img.cols(), fftw_sign(dir));
  auto* p = reinterpret_cast<fftw_complex*>(img.data());
  fftw_execute_dft(plan, p, p);
  kernels::scale(img.span(), 1.0 / std::sqrt(static_cast<double>(img.size())));
}

ComplexImage dft2(const ComplexImage& img, Direction dir) {
  ComplexImage out = img;
  dft2_inplace(out, dir);
  return out;
}

void dft1(std::span<const Complex> in, std::span<Complex> out, Direction dir) {
  if (in.size() != out.size()) throw DataError("dft1: input/output length mismatch");
  if (in.empty()) return;
  fftw_plan plan = get_plan(1, in.size(), 0, fftw_sign(dir));
  // FFTW takes a non-const input pointer but does not write to it out of place.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace fpm
