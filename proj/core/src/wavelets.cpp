#include "texseg/wavelets.hpp"

#include "texseg/fourier.hpp"
#include "texseg/littlewood_paley.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace texseg {
namespace {

constexpr double kPi = std::numbers::pi;

// Reconstruction lowpass taps of the standard orthogonal families
// (as tabulated by PyWavelets, rec_lo).
const std::vector<double>& taps(WaveletFamily f)
{
  static const std::vector<double> db2 = {
      0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037};
  static const std::vector<double> db3 = {
      0.33267055295008263,  0.8068915093110925,   0.45987750211849154,
      -0.13501102001025458, -0.08544127388202666, 0.03522629188570953};
  static const std::vector<double> sym4 = {
      0.0322231006040427,  -0.012603967262037833, -0.09921954357684722, 0.29785779560527736,
      0.8037387518059161,  0.49761866763201545,   -0.02963552764599851, -0.07576571478927333};
  static const std::vector<double> sym5 = {
      0.019538882735286728, -0.021101834024758855, -0.17532808990845047, 0.01660210576452232,
      0.6339789634582119,   0.7234076904024206,    0.1993975339773936,   -0.039134249302383094,
      0.029519490925774643, 0.027333068345077982};
  static const std::vector<double> coif1 = {
      -0.07273261951252645, 0.3378976624574818,   0.8525720202116004,
      0.3848648468648578,   -0.07273261951252645, -0.015655728135791993};
  static const std::vector<double> coif2 = {
      0.01638733646320364,   -0.04146493678687178,   -0.0673725547237256,
      0.3861100668227629,    0.8127236354494135,     0.4170051844232391,
      -0.07648859907828076,  -0.05943441864643109,   0.02368017194684777,
      0.005611434819368834,  -0.0018232088709110323, -0.000720549445520347};
  switch (f) {
    case WaveletFamily::Coif1: return coif1;
    case WaveletFamily::Coif2: return coif2;
    case WaveletFamily::Daub4: return db2;
    case WaveletFamily::Daub6: return db3;
    case WaveletFamily::Sym4: return sym4;
    case WaveletFamily::Sym5: return sym5;
  }
  throw std::invalid_argument("unknown wavelet family");
}

void require_levels(const Image& img, int levels, int lo, int hi, const char* what)
{
  require_pipeline_image(img, what);
  if (levels < lo || levels > hi)
    throw std::invalid_argument(fmt::format("{}: levels must be in [{}, {}], got {}", what, lo, hi, levels));
}

void require_divisible(const Image& img, int levels, const char* what)
{
  const std::size_t d = std::size_t{1} << levels;
  if (img.width() % d != 0)
    throw std::invalid_argument(
        fmt::format("{}: image side {} is not divisible by 2^{} = {}", what, img.width(), levels, d));
}

Image filter_rows_decimate(const Image& img, std::span<const double> f)
{
  const std::size_t w = img.width(), h = img.height();
  Image out(w / 2, h);
  std::vector<double> row(w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x)
      row[x] = img(x, y);
    const auto r = analyze_decimate(row, f);
    for (std::size_t k = 0; k < r.size(); ++k)
      out(k, y) = r[k];
  }
  return out;
}

Image filter_cols_decimate(const Image& img, std::span<const double> f)
{
  const std::size_t w = img.width(), h = img.height();
  Image out(w, h / 2);
  std::vector<double> col(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y)
      col[y] = img(x, y);
    const auto c = analyze_decimate(col, f);
    for (std::size_t k = 0; k < c.size(); ++k)
      out(x, k) = c[k];
  }
  return out;
}

const char* kSubbandNames[4] = {"LL", "LH", "HL", "HH"};

std::string path_name(const std::vector<std::uint8_t>& path)
{
  std::string s = "packet";
  for (auto p : path) {
    s += ' ';
    s += kSubbandNames[p];
  }
  return s;
}

void split_node(PacketNode& node, const OrthoFilterPair& filters)
{
  const DwtSubbands sb = dwt2d_step(node.coeffs, filters);
  const Image* parts[4] = {&sb.ll, &sb.lh, &sb.hl, &sb.hh};
  node.children.resize(4);
  for (std::uint8_t q = 0; q < 4; ++q) {
    node.children[q].path = node.path;
    node.children[q].path.push_back(q);
    node.children[q].coeffs = *parts[q];
  }
}

void grow(PacketNode& node, const OrthoFilterPair& filters, int depth_left, double energy)
{
  node.entropy_cost = shannon_cost(node.coeffs, energy);
  node.best_cost = node.entropy_cost;
  if (depth_left == 0)
    return;
  split_node(node, filters);
  double below = 0.0;
  for (auto& c : node.children) {
    grow(c, filters, depth_left - 1, energy);
    below += c.best_cost;
  }
  if (below < node.entropy_cost)
    node.best_cost = below;
  else
    node.children.clear();
}

void collect_leaves(const PacketNode& n, std::vector<const PacketNode*>& out)
{
  if (n.is_leaf()) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children)
    collect_leaves(c, out);
}

}  // namespace

const char* to_string(WaveletFamily f)
{
  switch (f) {
    case WaveletFamily::Coif1: return "Coif1";
    case WaveletFamily::Coif2: return "Coif2";
    case WaveletFamily::Daub4: return "Daub4";
    case WaveletFamily::Daub6: return "Daub6";
    case WaveletFamily::Sym4: return "Sym4";
    case WaveletFamily::Sym5: return "Sym5";
  }
  return "unknown";
}

WaveletFamily parse_wavelet_family(std::string_view name)
{
  for (auto f : kWaveletFamilies)
    if (name == to_string(f))
      return f;
  throw std::invalid_argument(fmt::format("unknown wavelet family '{}'", name));
}

OrthoFilterPair ortho_filters(WaveletFamily f)
{
  OrthoFilterPair p{f, taps(f), {}};
  const std::size_t L = p.h.size();
  p.g.resize(L);
  for (std::size_t n = 0; n < L; ++n)
    p.g[n] = (n % 2 == 0 ? 1.0 : -1.0) * p.h[L - 1 - n];
  return p;
}

std::vector<double> analyze_decimate(std::span<const double> x, std::span<const double> f)
{
  const std::size_t n = x.size();
  if (n % 2 != 0)
    throw std::invalid_argument("analyze_decimate: odd signal length");
  std::vector<double> y(n / 2, 0.0);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double s = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m)
      s += f[m] * x[(2 * k + m) % n];
    y[k] = s;
  }
  return y;
}

DwtSubbands dwt2d_step(const Image& img, const OrthoFilterPair& filters)
{
  const Image lo = filter_rows_decimate(img, filters.h);
  const Image hi = filter_rows_decimate(img, filters.g);
  return {filter_cols_decimate(lo, filters.h), filter_cols_decimate(lo, filters.g),
          filter_cols_decimate(hi, filters.h), filter_cols_decimate(hi, filters.g)};
}

DecimatedDwt dwt2d(const Image& img, WaveletFamily family, int levels)
{
  require_levels(img, levels, 1, 8, "dwt_decimated");
  require_divisible(img, levels, "dwt_decimated");
  const auto filters = ortho_filters(family);
  DecimatedDwt out;
  Image a = img;
  for (int j = 0; j < levels; ++j) {
    DwtSubbands sb = dwt2d_step(a, filters);
    out.details.push_back({std::move(sb.lh), std::move(sb.hl), std::move(sb.hh)});
    a = std::move(sb.ll);
  }
  out.approximation = std::move(a);
  return out;
}

Image upsample_nearest(const Image& img, std::size_t factor)
{
  Image out(img.width() * factor, img.height() * factor);
  for (std::size_t y = 0; y < out.height(); ++y)
    for (std::size_t x = 0; x < out.width(); ++x)
      out(x, y) = img(x / factor, y / factor);
  return out;
}

CoefficientStack dwt_decimated(const Image& img, WaveletFamily family, int levels)
{
  const DecimatedDwt d = dwt2d(img, family, levels);
  CoefficientStack s;
  s.bands.push_back(upsample_nearest(d.approximation, std::size_t{1} << levels));
  s.band_meta.push_back(fmt::format("level{} LL", levels));
  for (int j = 0; j < levels; ++j) {
    const char* names[3] = {"LH", "HL", "HH"};
    for (int q = 0; q < 3; ++q) {
      s.bands.push_back(upsample_nearest(d.details[j][q], std::size_t{1} << (j + 1)));
      s.band_meta.push_back(fmt::format("level{} {}", j + 1, names[q]));
    }
  }
  s.lowpass_index = 0;
  return s;
}

Image correlate_dilated(const Image& img, std::span<const double> f, std::size_t dilation, bool along_x)
{
  const std::size_t w = img.width(), h = img.height();
  Image out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double s = 0.0;
      for (std::size_t m = 0; m < f.size(); ++m) {
        if (along_x)
          s += f[m] * img((x + m * dilation) % w, y);
        else
          s += f[m] * img(x, (y + m * dilation) % h);
      }
      out(x, y) = s;
    }
  }
  return out;
}

CoefficientStack dwt_undecimated(const Image& img, WaveletFamily family, int levels)
{
  require_levels(img, levels, 1, 8, "dwt_undecimated");
  const auto filters = ortho_filters(family);
  std::vector<double> h(filters.h), g(filters.g);
  for (double& v : h)
    v /= std::sqrt(2.0);
  for (double& v : g)
    v /= std::sqrt(2.0);
  CoefficientStack s;
  s.bands.emplace_back();
  s.band_meta.emplace_back();
  Image a = img;
  for (int j = 0; j < levels; ++j) {
    const std::size_t dil = std::size_t{1} << j;
    const Image lo = correlate_dilated(a, h, dil, true);
    const Image hi = correlate_dilated(a, g, dil, true);
    s.bands.push_back(correlate_dilated(lo, g, dil, false));
    s.band_meta.push_back(fmt::format("level{} LH", j + 1));
    s.bands.push_back(correlate_dilated(hi, h, dil, false));
    s.band_meta.push_back(fmt::format("level{} HL", j + 1));
    s.bands.push_back(correlate_dilated(hi, g, dil, false));
    s.band_meta.push_back(fmt::format("level{} HH", j + 1));
    a = correlate_dilated(lo, h, dil, false);
  }
  s.bands[0] = std::move(a);
  s.band_meta[0] = fmt::format("level{} LL", levels);
  s.lowpass_index = 0;
  return s;
}

double shannon_cost(const Image& coeffs, double energy)
{
  if (energy <= 0.0)
    return 0.0;
  double c = 0.0;
  for (double v : coeffs.pixels()) {
    const double p = v * v / energy;
    if (p > 0.0)
      c -= p * std::log(p);
  }
  return c;
}

PacketNode packet_tree(const Image& img, WaveletFamily family, int max_depth)
{
  require_levels(img, max_depth, 1, 8, "packet_best_basis");
  require_divisible(img, max_depth, "packet_best_basis");
  const auto filters = ortho_filters(family);
  PacketNode root;
  root.coeffs = img;
  const double energy = img.norm() * img.norm();
  grow(root, filters, max_depth, energy);
  return root;
}

double fixed_depth_cost(const Image& img, WaveletFamily family, int depth)
{
  if (depth < 0)
    throw std::invalid_argument("fixed_depth_cost: negative depth");
  require_divisible(img, depth, "fixed_depth_cost");
  const auto filters = ortho_filters(family);
  const double energy = img.norm() * img.norm();
  std::vector<Image> level{img};
  for (int d = 0; d < depth; ++d) {
    std::vector<Image> next;
    for (const auto& c : level) {
      DwtSubbands sb = dwt2d_step(c, filters);
      next.push_back(std::move(sb.ll));
      next.push_back(std::move(sb.lh));
      next.push_back(std::move(sb.hl));
      next.push_back(std::move(sb.hh));
    }
    level = std::move(next);
  }
  double cost = 0.0;
  for (const auto& c : level)
    cost += shannon_cost(c, energy);
  return cost;
}

std::vector<const PacketNode*> leaves(const PacketNode& root)
{
  std::vector<const PacketNode*> out;
  collect_leaves(root, out);
  return out;
}

CoefficientStack packet_best_basis(const Image& img, WaveletFamily family, int max_depth)
{
  PacketNode root = packet_tree(img, family, max_depth);
  if (root.is_leaf())
    split_node(root, ortho_filters(family));
  CoefficientStack s;
  const std::size_t n = img.width();
  for (const PacketNode* leaf : leaves(root)) {
    bool all_low = true;
    for (auto p : leaf->path)
      all_low = all_low && p == 0;
    if (all_low)
      s.lowpass_index = s.bands.size();
    s.bands.push_back(upsample_nearest(leaf->coeffs, n / leaf->coeffs.width()));
    s.band_meta.push_back(path_name(leaf->path));
  }
  return s;
}

FilterBank gabor_filters(std::size_t n, int n_scales, int n_orientations)
{
  if (n_scales < 1)
    throw std::invalid_argument(fmt::format("gabor_bank: n_scales must be >= 1, got {}", n_scales));
  if (n_orientations < 2)
    throw std::invalid_argument(fmt::format("gabor_bank: n_orientations must be >= 2, got {}", n_orientations));
  const double omega0 = 0.5 * kPi;
  const double sigma_r = 1.0 / (3.0 * std::sqrt(std::log(2.0)));
  const double sigma_t = std::sin(kPi / (2.0 * n_orientations)) / std::sqrt(std::log(2.0));
  const double sigma_low = 0.5 * std::ldexp(1.0, -(n_scales - 1));

  FilterBank bank;
  bank.width = bank.height = n;
  bank.partition.kind = PartitionKind::gabor;
  bank.lowpass_index = 0;
  bank.includes_lowpass = true;
  bank.masks.emplace_back(n * n);
  bank.band_meta.push_back("gaussian lowpass");
  for (int s = 0; s < n_scales; ++s) {
    for (int k = 0; k < n_orientations; ++k) {
      bank.masks.emplace_back(n * n);
      bank.band_meta.push_back(fmt::format("scale{} orientation{}", s, k));
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const double ny = bin_frequency(v, n) / omega0;
    for (std::size_t u = 0; u < n; ++u) {
      const double nx = bin_frequency(u, n) / omega0;
      const std::size_t b = v * n + u;
      bank.masks[0][b] = std::exp(-(nx * nx + ny * ny) / (2.0 * sigma_low * sigma_low));
      std::size_t m = 1;
      for (int s = 0; s < n_scales; ++s) {
        const double scale = std::ldexp(1.0, s);
        const double amp = std::sqrt(scale);
        for (int k = 0; k < n_orientations; ++k, ++m) {
          const double a = kPi * k / n_orientations;
          const double c = std::cos(a), sn = std::sin(a);
          double val = 0.0;
          for (double sign : {1.0, -1.0}) {
            const double px = scale * nx * sign, py = scale * ny * sign;
            const double par = px * c + py * sn - 1.0;
            const double perp = -px * sn + py * c;
            val += std::exp(-par * par / (2.0 * sigma_r * sigma_r) - perp * perp / (2.0 * sigma_t * sigma_t));
          }
          bank.masks[m][b] = amp * val;
        }
      }
    }
  }
  return bank;
}

CoefficientStack gabor_bank(const Image& img, int n_scales, int n_orientations)
{
  require_pipeline_image(img, "gabor_bank");
  return apply_filter_bank(img, gabor_filters(img.width(), n_scales, n_orientations));
}

namespace {
BoundarySet dyadic_rings(int n_scales, const char* what)
{
  if (n_scales < 1 || n_scales > 10)
    throw std::invalid_argument(fmt::format("{}: n_scales must be in [1, 10], got {}", what, n_scales));
  std::vector<double> interior;
  for (int j = n_scales; j >= 1; --j)
    interior.push_back(kPi * std::ldexp(1.0, -j));
  return make_boundary_set(std::move(interior));
}
}  // namespace

FilterBank meyer_filters(std::size_t n, int n_scales)
{
  return ring_bank(n, dyadic_rings(n_scales, "meyer_lp"), PartitionKind::meyer);
}

CoefficientStack meyer_lp(const Image& img, int n_scales)
{
  require_pipeline_image(img, "meyer_lp");
  return apply_filter_bank(img, meyer_filters(img.width(), n_scales));
}

FourierPartition prescribed_curvelet_partition(int n_scales, int n_orientations)
{
  if (n_scales < 2)
    throw std::invalid_argument(fmt::format("prescribed_curvelet: n_scales must be >= 2, got {}", n_scales));
  if (n_orientations < 2)
    throw std::invalid_argument(
        fmt::format("prescribed_curvelet: n_orientations must be >= 2, got {}", n_orientations));
  FourierPartition p;
  p.kind = PartitionKind::prescribed_curvelet;
  p.radial.push_back(dyadic_rings(n_scales, "prescribed_curvelet"));
  std::vector<double> angles;
  for (int s = 0; s < n_orientations; ++s)
    angles.push_back(-0.5 * kPi + (s + 0.5) * kPi / n_orientations);
  p.angular.emplace_back(std::move(angles));
  return p;
}

FilterBank prescribed_curvelet_filters(std::size_t n, int n_scales, int n_orientations)
{
  return polar_bank(n, prescribed_curvelet_partition(n_scales, n_orientations));
}

CoefficientStack prescribed_curvelet(const Image& img, int n_scales, int n_orientations)
{
  require_pipeline_image(img, "prescribed_curvelet");
  return apply_filter_bank(img, prescribed_curvelet_filters(img.width(), n_scales, n_orientations));
}

}  // namespace texseg
