#include "fpm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace fpm {

double rms_difference(const RealImage& a, const RealImage& b) {
  require_same_shape(a, b, "rmse");
  if (a.empty()) throw DataError("rmse: empty image");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double rmse(const RealImage& reference, const RealImage& estimate) {
  const double raw = rms_difference(reference, estimate);
  const auto [lo, hi] = std::minmax_element(reference.begin(), reference.end());
  double norm = *hi - *lo;
  if (!(norm > 0.0)) norm = max_abs(reference);
  if (!(norm > 0.0)) norm = 1.0;
  return raw / norm;
}

double wrap_phase(double x) {
  double w = std::remainder(x, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

RealImage phase_align(const RealImage& recovered, const RealImage& truth) {
  require_same_shape(recovered, truth, "phase_align");
  Complex acc{};
  for (std::size_t i = 0; i < truth.size(); ++i) acc += std::polar(1.0, recovered[i] - truth[i]);
  const double offset = std::arg(acc);
  RealImage out(recovered.rows(), recovered.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = wrap_phase(recovered[i] - offset);
  return out;
}

double background_phase_std(const RealImage& phase, const Region& region) {
  std::vector<double> samples;
  if (region.kind == Region::Kind::rectangle) {
    if (region.row1 > phase.rows() || region.col1 > phase.cols() || region.row0 > region.row1 ||
        region.col0 > region.col1) {
      throw DataError("background region lies outside the image");
    }
    for (std::size_t r = region.row0; r < region.row1; ++r) {
      for (std::size_t c = region.col0; c < region.col1; ++c) samples.push_back(phase(r, c));
    }
  } else {
    if (std::max(region.row0, region.row1) >= phase.rows() ||
        std::max(region.col0, region.col1) >= phase.cols()) {
      throw DataError("background segment lies outside the image");
    }
    const double dr = static_cast<double>(region.row1) - static_cast<double>(region.row0);
    const double dc = static_cast<double>(region.col1) - static_cast<double>(region.col0);
    const auto steps = static_cast<std::size_t>(std::max(std::abs(dr), std::abs(dc)));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = steps == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(steps);
      const auto r = static_cast<std::size_t>(std::lround(static_cast<double>(region.row0) + t * dr));
      const auto c = static_cast<std::size_t>(std::lround(static_cast<double>(region.col0) + t * dc));
      samples.push_back(phase(r, c));
    }
  }
  if (samples.empty()) throw DataError("background region is empty");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(samples.size()));
}

namespace {

template <typename F>
void for_each_outside_disk(std::size_t rows, std::size_t cols, double radius, F&& f) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double fr = static_cast<double>(signed_frequency(r, rows));
    for (std::size_t c = 0; c < cols; ++c) {
      const double fc = static_cast<double>(signed_frequency(c, cols));
      if (fr * fr + fc * fc <= radius * radius) continue;
      f(r, c);
    }
  }
}

}  // namespace

double axis_artifact_energy(const ComplexImage& spectrum, double exclude_dc_radius) {
  if (!(exclude_dc_radius >= 1.0)) throw ConfigError("exclude_dc_radius must be at least 1");
  double axis = 0.0, total = 0.0;
  for_each_outside_disk(spectrum.rows(), spectrum.cols(), exclude_dc_radius,
                        [&](std::size_t r, std::size_t c) {
                          const double e = std::norm(spectrum(r, c));
                          total += e;
                          if (r == 0 || c == 0) axis += e;
                        });
  return total > 0.0 ? axis / total : 0.0;
}

double axis_artifact_null_reference(std::size_t rows, std::size_t cols, double exclude_dc_radius) {
  double axis = 0.0, total = 0.0;
  for_each_outside_disk(rows, cols, exclude_dc_radius, [&](std::size_t r, std::size_t c) {
    total += 1.0;
    if (r == 0 || c == 0) axis += 1.0;
  });
  return total > 0.0 ? axis / total : 0.0;
}

double block_consistency(const RealImage& full_phase, const RealImage& sub_phase,
                         std::size_t origin_row, std::size_t origin_col) {
  if (origin_row + sub_phase.rows() > full_phase.rows() ||
      origin_col + sub_phase.cols() > full_phase.cols()) {
    throw DataError("block_consistency: sub-tile does not fit inside the full tile");
  }
  const auto guard_for = [](std::size_t side) {
    return static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(side)));
  };
  const std::size_t gr = guard_for(sub_phase.rows());
  const std::size_t gc = guard_for(sub_phase.cols());
  if (2 * gr >= sub_phase.rows() || 2 * gc >= sub_phase.cols()) {
    throw DataError("block_consistency: sub-tile too small for the guard band");
  }
  const std::size_t rows = sub_phase.rows() - 2 * gr;
  const std::size_t cols = sub_phase.cols() - 2 * gc;
  const RealImage a = crop(full_phase, origin_row + gr, origin_col + gc, rows, cols);
  const RealImage b = crop(sub_phase, gr, gc, rows, cols);
  const RealImage aligned = phase_align(b, a);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = wrap_phase(aligned[i] - a[i]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  const auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("rmse_intensity", rmse_intensity);
  put("rmse_phase", rmse_phase);
  put("background_phase_std", background_phase_std);
  put("axis_artifact_energy", axis_artifact_energy);
  put("block_consistency", block_consistency);
  put("wall_time", wall_time);
  return j.dump(2);
}

}  // namespace fpm
