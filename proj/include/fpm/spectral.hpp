#pragma once

// Fourier backends: the plain unitary DFT, the mirror-extension ("DCT-style")
// quadrupling, and the periodic-plus-smooth split that removes the boundary
// cross from a spectrum.

#include <memory>

#include "fpm/fft.hpp"
#include "fpm/image.hpp"

namespace fpm {

enum class Backend { fft, dct, pft };

const char* backend_name(Backend b);
Backend parse_backend(const std::string& name);

/// Wrap-around mismatch of an image. u1 lives on the first and last rows,
/// u2 on the first and last columns; corners carry both.
template <typename T>
struct BoundaryImage {
  Image<T> u1;
  Image<T> u2;
  Image<T> combined() const;
};

template <typename T>
BoundaryImage<T> boundary_image(const Image<T>& f);

/// Closed-form spectrum of the 4-neighbour stencil
///   2 cos(2 pi x / M) + 2 cos(2 pi y / N) - 4,  x along rows, y along columns.
struct KernelSpectrum {
  RealImage values;
};

KernelSpectrum kernel_spectrum(std::size_t rows, std::size_t cols);

/// f = g + e with e the smooth component (zero mean, K * e = u(f)) and g the
/// periodic component.
template <typename T>
struct Decomposition {
  Image<T> g;
  Image<T> e;
};

Decomposition<double> periodic_smooth_decompose(const RealImage& f);
Decomposition<Complex> periodic_smooth_decompose(const ComplexImage& f);

/// Unitary spectrum of the smooth component of f, computed from the border
/// alone (two 1D transforms, no 2D transform). DC bin is zero.
ComplexImage smooth_spectrum(const ComplexImage& f);

/// spectrum -= smooth_spectrum(f), in place. `spectrum` must already hold
/// dft2(f) (or any spectrum the correction should be applied to).
void subtract_smooth_spectrum(const ComplexImage& f, ComplexImage& spectrum);

/// dft2 of the periodic component, computed as dft2(f) - smooth_spectrum(f).
ComplexImage pft_forward(const ComplexImage& f);
ComplexImage pft_forward(const RealImage& f);

/// 2M x 2N even extension: f, its left-right mirror, its up-down mirror and the
/// double mirror, so that opposite edges coincide under circular wrap.
template <typename T>
Image<T> symmetric_quadruple(const Image<T>& f);

/// Top-left quarter of an image with even dimensions.
template <typename T>
Image<T> crop_quarter(const Image<T>& ext);

}  // namespace fpm
