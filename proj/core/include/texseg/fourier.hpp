#pragma once

#include "texseg/image.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace texseg {

/// 2D discrete Fourier transform of an image, stored DC-centered: bin (u, v)
/// holds frequency index (u - width/2, v - height/2), i.e. angular
/// frequencies omega_x = 2*pi*(u - width/2)/width in [-pi, pi). Unnormalized
/// forward transform, so a constant image c has DC value c * width * height.
class Spectrum {
public:
  Spectrum() = default;
  Spectrum(std::size_t width, std::size_t height);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::complex<double>& operator()(std::size_t u, std::size_t v) { return data_[v * width_ + u]; }
  const std::complex<double>& operator()(std::size_t u, std::size_t v) const { return data_[v * width_ + u]; }

  std::span<std::complex<double>> bins() { return data_; }
  std::span<const std::complex<double>> bins() const { return data_; }

  std::size_t dc_u() const { return width_ / 2; }
  std::size_t dc_v() const { return height_ / 2; }

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::complex<double>> data_;
};

/// Angular frequency of centered bin index `index` on an axis of length `n`.
inline double bin_frequency(std::size_t index, std::size_t n)
{
  constexpr double two_pi = 6.283185307179586476925286766559;
  return two_pi * (static_cast<double>(index) - static_cast<double>(n / 2)) / static_cast<double>(n);
}

Spectrum forward_spectrum(const Image& img);

/// Real part of the inverse transform (exact inverse of forward_spectrum for
/// spectra of real images).
Image inverse_spectrum(const Spectrum& spec);

/// Multiplies a spectrum by a real DC-centered mask and returns the real part
/// of the inverse transform.
Image filter_spectrum(const Spectrum& spec, std::span<const double> mask);

/// Magnitude of the 1D DFT of each row (or column), averaged over rows
/// (columns). Samples k = 0..n/2 correspond to frequencies 2*pi*k/n.
std::vector<double> mean_row_magnitude(const Image& img);
std::vector<double> mean_column_magnitude(const Image& img);

/// 1D DFT in natural order. The forward transform is unnormalized; the
/// inverse divides by n.
std::vector<std::complex<double>> dft_1d(std::span<const std::complex<double>> x, bool inverse = false);

/// |DFT| of a real sequence, bins 0..n/2.
std::vector<double> half_magnitude_spectrum(std::span<const double> signal);

/// Magnitude spectrum resampled on a polar grid. Radius i maps to
/// pi * i / (n_radii - 1); angle j maps to -pi/2 + pi * j / n_angles, so the
/// half plane [-pi/2, pi/2) is covered (the other half is its mirror image
/// for real inputs).
struct PolarSpectrum {
  std::size_t n_radii = 0;
  std::size_t n_angles = 0;
  std::vector<double> magnitude;  // index radius * n_angles + angle

  double at(std::size_t radius, std::size_t angle) const { return magnitude[radius * n_angles + angle]; }
  double radius_of(std::size_t i) const;
  double angle_of(std::size_t j) const;
};

/// Bilinear interpolation of |spec| (periodic in both axes). Requires
/// n_radii >= 32 and an even n_angles >= 64.
PolarSpectrum polar_resample(const Spectrum& spec, std::size_t n_radii, std::size_t n_angles);

/// Default polar grid for an N x N image: max(32, N/2) radii and 360 angles.
PolarSpectrum polar_resample(const Spectrum& spec);

}  // namespace texseg
