#pragma once

#include "texseg/fourier.hpp"
#include "texseg/image.hpp"
#include "texseg/littlewood_paley.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace texseg {

enum class PartitionKind {
  tensor,
  littlewood_paley,
  curvelet1,
  curvelet2,
  curvelet3,
  meyer,
  prescribed_curvelet,
  gabor,
  spatial,  // banks applied by convolution (DWT families); no Fourier masks
};

const char* to_string(PartitionKind kind);

/// Fourier-support descriptors of one filter family.
///  tensor:                radial = {rows (omega_x), columns (omega_y)}
///  littlewood_paley/meyer: radial = {rings}
///  curvelet1/prescribed:  radial = {rings}, angular = {sectors}
///  curvelet2:             radial = {rings}, angular = one entry per ring (n >= 1)
///  curvelet3:             radial = one entry per sector (all share omega_1),
///                         angular = {sectors}
struct FourierPartition {
  PartitionKind kind = PartitionKind::littlewood_paley;
  std::vector<BoundarySet> radial;
  std::vector<AngularSectors> angular;

  /// First radial boundary above DC (omega_1), or 0 when there is none.
  double first_radius() const;
};

/// CSV dump: set,index,kind,value,tau
void write_partition_csv(const FourierPartition& p, std::ostream& os);

/// K wavelet responses of an image, each the size of the input.
struct CoefficientStack {
  std::vector<Image> bands;
  std::vector<std::string> band_meta;
  std::size_t lowpass_index = 0;

  std::size_t size() const { return bands.size(); }
};

/// Real DC-centered Fourier masks, one per band.
struct FilterBank {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::vector<double>> masks;
  std::vector<std::string> band_meta;
  std::size_t lowpass_index = 0;
  bool includes_lowpass = true;
  FourierPartition partition;

  std::size_t size() const { return masks.size(); }
};

/// max over bins of |sum_k mask_k^2 - 1|.
double tightness_error(const FilterBank& bank);

/// Divides every mask by sqrt(sum_k mask_k^2) bin by bin. Bins covered by no
/// mask are assigned to the lowpass.
void renormalize(FilterBank& bank);

/// Copies each mask value to the conjugate-partner bin (-omega) so that
/// filtered real images stay real; matters on the Nyquist row and column of
/// even-sized grids.
void symmetrize(FilterBank& bank);

CoefficientStack apply_filter_bank(const Image& img, const FilterBank& bank);
CoefficientStack apply_filter_bank(const Spectrum& spec, const FilterBank& bank);

/// Adjoint synthesis sum_k IFFT(mask_k * FFT(band_k)); inverts
/// apply_filter_bank for tight banks.
Image reconstruct(const CoefficientStack& stack, const FilterBank& bank);

/// Separable bank: mask(n, m) = rows_n(|omega_x|) * cols_m(|omega_y|).
FilterBank tensor_bank(std::size_t width, std::size_t height, const BoundarySet& rows, const BoundarySet& cols);

/// Isotropic rings from one BoundarySet (kind littlewood_paley or meyer).
FilterBank ring_bank(std::size_t n, const BoundarySet& rings, PartitionKind kind);

/// Ring x sector cells described by a curvelet-type partition. Band 0 is
/// the low-frequency disk; then ring by ring (C1, C2, prescribed) or sector
/// by sector (C3).
FilterBank polar_bank(std::size_t n, const FourierPartition& partition);

}  // namespace texseg
