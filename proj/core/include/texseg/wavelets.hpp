#pragma once

#include "texseg/filter_bank.hpp"
#include "texseg/image.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace texseg {

/// Orthogonal families by their tap counts: Daub4/Daub6 have 4 and 6 taps
/// (2 and 3 vanishing moments), Sym4/Sym5 and Coif1/Coif2 are indexed by
/// vanishing moments (8, 10, 6 and 12 taps).
enum class WaveletFamily { Coif1, Coif2, Daub4, Daub6, Sym4, Sym5 };

const char* to_string(WaveletFamily f);
WaveletFamily parse_wavelet_family(std::string_view name);
inline constexpr std::array<WaveletFamily, 6> kWaveletFamilies = {
    WaveletFamily::Coif1, WaveletFamily::Coif2, WaveletFamily::Daub4,
    WaveletFamily::Daub6, WaveletFamily::Sym4,  WaveletFamily::Sym5};

struct OrthoFilterPair {
  WaveletFamily family;
  std::vector<double> h;  // lowpass, sum sqrt(2), unit norm
  std::vector<double> g;  // g[n] = (-1)^n h[L-1-n]
};

OrthoFilterPair ortho_filters(WaveletFamily f);

/// One periodic analysis step: y[k] = sum_n f[n] x[(2k + n) mod N].
std::vector<double> analyze_decimate(std::span<const double> x, std::span<const double> f);

/// Subbands of one level of the separable decimated transform.
struct DwtSubbands {
  Image ll, lh, hl, hh;  // first letter: filter along x
};
DwtSubbands dwt2d_step(const Image& img, const OrthoFilterPair& filters);

/// Raw (not upsampled) decimated coefficients: details[j] for level j+1
/// (finest first) and the coarsest approximation.
struct DecimatedDwt {
  std::vector<std::array<Image, 3>> details;  // {lh, hl, hh}
  Image approximation;
};
DecimatedDwt dwt2d(const Image& img, WaveletFamily family, int levels);

/// Nearest-neighbour upsampling by an integer factor.
Image upsample_nearest(const Image& img, std::size_t factor);

/// Decimated tensor DWT with every subband brought back to N x N.
/// Band 0 is the approximation; K = 3 * levels + 1.
CoefficientStack dwt_decimated(const Image& img, WaveletFamily family, int levels);

/// Circular correlation with f dilated by `dilation` (zeros between taps):
/// y[x] = sum_n f[n] a[(x + n * dilation) mod N], along x or along y.
Image correlate_dilated(const Image& img, std::span<const double> f, std::size_t dilation, bool along_x);

/// A trous transform with filters h/sqrt(2), g/sqrt(2) (a Parseval frame).
/// Band 0 is the approximation; K = 3 * levels + 1.
CoefficientStack dwt_undecimated(const Image& img, WaveletFamily family, int levels);

/// Quadtree of decimated packet coefficients with best-basis selection.
struct PacketNode {
  std::vector<std::uint8_t> path;  // 0 = LL, 1 = LH, 2 = HL, 3 = HH per level
  Image coeffs;
  double entropy_cost = 0.0;  // Shannon cost of this node alone
  double best_cost = 0.0;     // cost of the best basis below (and including) it
  std::vector<PacketNode> children;  // empty or exactly four

  bool is_leaf() const { return children.empty(); }
};

/// Additive Shannon cost -sum p log p with p = c^2 / energy.
double shannon_cost(const Image& coeffs, double energy);

/// Full tree to max_depth with best-basis pruning: a node keeps its
/// children only when their best cost is strictly lower than its own.
PacketNode packet_tree(const Image& img, WaveletFamily family, int max_depth);
/// Cost of the fixed basis made of every packet node at `depth`.
double fixed_depth_cost(const Image& img, WaveletFamily family, int depth);
std::vector<const PacketNode*> leaves(const PacketNode& root);

/// Best-basis leaves upsampled to N x N. If the best basis is the root
/// itself the root is split once, so at least one band besides the
/// lowpass exists.
CoefficientStack packet_best_basis(const Image& img, WaveletFamily family, int max_depth);

/// Gabor-type bank: elliptical Gaussians centered at (pi/2) 2^-s (cos a, sin a),
/// a = k pi / n_orientations, mirrored at -omega so responses are real,
/// scaled by sqrt(2^s), plus a Gaussian lowpass (band 0).
FilterBank gabor_filters(std::size_t n, int n_scales, int n_orientations);
CoefficientStack gabor_bank(const Image& img, int n_scales = 4, int n_orientations = 6);

/// Fixed dyadic rings {pi/2^s, ..., pi/2}: lowpass plus n_scales rings.
FilterBank meyer_filters(std::size_t n, int n_scales);
CoefficientStack meyer_lp(const Image& img, int n_scales);

/// Dyadic rings x uniform sectors; K = 1 + n_scales * n_orientations.
FourierPartition prescribed_curvelet_partition(int n_scales, int n_orientations);
FilterBank prescribed_curvelet_filters(std::size_t n, int n_scales, int n_orientations);
CoefficientStack prescribed_curvelet(const Image& img, int n_scales = 3, int n_orientations = 8);

}  // namespace texseg
