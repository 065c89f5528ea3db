#pragma once

#include "texseg/filter_bank.hpp"
#include "texseg/fourier.hpp"
#include "texseg/image.hpp"
#include "texseg/littlewood_paley.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace texseg {

/// Positions (in samples, possibly half-integer for plateaus) of the local
/// minima of `seq` that persist through the Gaussian scale space, split from
/// short-lived ones by Otsu's threshold on their lifetimes. When `periodic`
/// is false the endpoints are never minima. Each returned position is then
/// moved to the lowest sample between the two meaningful maxima around it.
std::vector<double> persistent_minima(std::span<const double> seq, bool periodic);

/// Spectrum segmentation of a magnitude curve sampled uniformly on [0, pi]
/// (sample i at pi * i / (size - 1)). Requires at least 16 finite samples.
///
/// When no interior minimum is meaningful but the curve peaks away from DC
/// (a band-pass spectrum), a single boundary is placed at half the peak
/// frequency so that the lowpass does not swallow the whole spectrum.
BoundarySet detect_boundaries_1d(std::span<const double> mag);

/// Angle boundaries in [-pi/2, pi/2) of an angular magnitude profile
/// (sample j at -pi/2 + pi * j / size), treated as periodic.
std::vector<double> detect_angle_boundaries(std::span<const double> profile);

struct EwtTransform {
  CoefficientStack stack;
  FilterBank bank;

  const FourierPartition& partition() const { return bank.partition; }
};

/// Partition detection alone (no filtering); the transforms below are
/// bank construction + apply_filter_bank on top of these.
FourierPartition detect_tensor_partition(const Image& img);
FourierPartition detect_lp_partition(const Spectrum& spec);
FourierPartition detect_curvelet_partition(const Spectrum& spec, int option);

/// Builds the bank of a detected partition at size n x n.
FilterBank build_bank(const FourierPartition& partition, std::size_t n);

EwtTransform ewt2d_tensor(const Image& img);
EwtTransform ewt2d_lp(const Image& img);
/// option 1: global radii and angles; 2: angles per ring; 3: radii per sector.
EwtTransform ewt2d_curvelet(const Image& img, int option);

/// Interior radii (omega_1, omega_2, ...) of the EWT2DLP partition.
std::vector<double> lp_radii(const Image& img);

/// 1D empirical wavelet transform of an even-length real signal.
struct Ewt1D {
  BoundarySet boundaries;
  std::vector<std::vector<double>> filters;  // sampled on the DFT grid
  std::vector<std::vector<double>> bands;
};
Ewt1D ewt1d(std::span<const double> signal);
std::vector<double> ewt1d_reconstruct(const Ewt1D& t);
double tightness_error(const Ewt1D& t);

}  // namespace texseg
