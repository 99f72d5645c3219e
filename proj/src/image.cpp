#include "fpm/image.hpp"

#include <algorithm>
#include <cmath>

namespace fpm {

void require_min_size(std::size_t rows, std::size_t cols, std::size_t minimum,
                      const std::string& what) {
  if (rows < minimum || cols < minimum) {
    throw DataError(what + ": image must be at least " + std::to_string(minimum) + "x" +
                    std::to_string(minimum) + ", got " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

bool all_finite(const RealImage& img) {
  return std::all_of(img.begin(), img.end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(const ComplexImage& img) {
  return std::all_of(img.begin(), img.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexImage to_complex(const RealImage& re) {
  ComplexImage out(re.rows(), re.cols());
  for (std::size_t i = 0; i < re.size(); ++i) out[i] = Complex(re[i], 0.0);
  return out;
}

ComplexImage to_complex(const RealImage& re, const RealImage& im) {
  require_same_shape(re, im, "to_complex");
  ComplexImage out(re.rows(), re.cols());
  for (std::size_t i = 0; i < re.size(); ++i) out[i] = Complex(re[i], im[i]);
  return out;
}

ComplexImage from_polar(const RealImage& amplitude, const RealImage& phase) {
  require_same_shape(amplitude, phase, "from_polar");
  ComplexImage out(amplitude.rows(), amplitude.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::polar(amplitude[i], phase[i]);
  return out;
}

RealImage real_part(const ComplexImage& z) {
  RealImage out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

RealImage imag_part(const ComplexImage& z) {
  RealImage out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].imag();
  return out;
}

RealImage magnitude(const ComplexImage& z) {
  RealImage out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::abs(z[i]);
  return out;
}

RealImage phase(const ComplexImage& z) {
  RealImage out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double a = std::arg(z[i]);
    // std::arg returns [-pi, pi]; fold -pi onto pi
    out[i] = a == -M_PI ? M_PI : a;
  }
  return out;
}

double l2_norm(const RealImage& img) {
  double s = 0.0;
  for (double v : img) s += v * v;
  return std::sqrt(s);
}

double l2_norm(const ComplexImage& img) {
  double s = 0.0;
  for (const Complex& v : img) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs(const RealImage& img) {
  double m = 0.0;
  for (double v : img) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const ComplexImage& img) {
  double m = 0.0;
  for (const Complex& v : img) m = std::max(m, std::abs(v));
  return m;
}

double mean(const RealImage& img) {
  double s = 0.0;
  for (double v : img) s += v;
  return img.empty() ? 0.0 : s / static_cast<double>(img.size());
}

Complex mean(const ComplexImage& img) {
  Complex s = 0.0;
  for (const Complex& v : img) s += v;
  return img.empty() ? Complex{} : s / static_cast<double>(img.size());
}

}  // namespace fpm
