#include "texseg/features.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace texseg {
namespace {

std::size_t mirror(long i, std::size_t n)
{
  const long m = static_cast<long>(n);
  const long period = 2 * m;
  long k = ((i % period) + period) % period;
  return static_cast<std::size_t>(k < m ? k : period - 1 - k);
}

void box_1d(std::span<const double> in, std::span<double> out, long r, std::vector<double>& prefix)
{
  const std::size_t n = in.size();
  const std::size_t len = n + 2 * static_cast<std::size_t>(r);
  prefix.assign(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i)
    prefix[i + 1] = prefix[i] + in[mirror(static_cast<long>(i) - r, n)];
  const double inv = 1.0 / static_cast<double>(2 * r + 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (prefix[i + 2 * static_cast<std::size_t>(r) + 1] - prefix[i]) * inv;
}

std::vector<std::size_t> kept_bands(const CoefficientStack& stack, const PostProcessConfig& cfg)
{
  cfg.validate();
  if (stack.bands.empty())
    throw std::invalid_argument("post-processing: empty coefficient stack");
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < stack.size(); ++k)
    if (!(cfg.drop_lowpass && k == stack.lowpass_index))
      keep.push_back(k);
  if (keep.empty())
    throw std::runtime_error("post-processing: no band left after dropping the lowpass");
  const auto& b0 = stack.bands.front();
  for (const auto& b : stack.bands)
    if (b.width() != b0.width() || b.height() != b0.height())
      throw std::invalid_argument("post-processing: bands differ in size");
  return keep;
}

template <class Transform>
FeatureField build(const CoefficientStack& stack, const PostProcessConfig& cfg, Transform&& t)
{
  const auto keep = kept_bands(stack, cfg);
  const auto& b0 = stack.bands.front();
  FeatureField f;
  f.width = b0.width();
  f.height = b0.height();
  f.dim = keep.size();
  f.data.assign(f.pixels() * f.dim, 0.0);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const Image feat = local_mean(t(stack.bands[keep[j]]), cfg.window);
    const auto px = feat.pixels();
    for (std::size_t p = 0; p < px.size(); ++p)
      f.data[p * f.dim + j] = px[p];
  }
  return f;
}

template <class T>
void put_le(std::ostream& os, T v)
{
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
    throw std::runtime_error("feature dump: truncated file");
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

const char* to_string(PostMode m)
{
  switch (m) {
    case PostMode::energy: return "energy";
    case PostMode::entropy: return "entropy";
    case PostMode::lbp: return "lbp";
  }
  return "unknown";
}

PostMode parse_post_mode(std::string_view name)
{
  for (auto m : {PostMode::energy, PostMode::entropy, PostMode::lbp})
    if (name == to_string(m))
      return m;
  throw std::invalid_argument(fmt::format("unknown post-processing mode '{}'", name));
}

void PostProcessConfig::validate() const
{
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument(fmt::format("window must be a positive odd size, got {}", window));
}

Image local_mean(const Image& band, int window)
{
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument(fmt::format("local_mean: window must be a positive odd size, got {}", window));
  if (window == 1)
    return band;
  const long r = window / 2;
  const std::size_t w = band.width(), h = band.height();
  Image tmp(w, h), out(w, h);
  std::vector<double> prefix, line, res;
  line.resize(std::max(w, h));
  res.resize(std::max(w, h));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x)
      line[x] = band(x, y);
    box_1d({line.data(), w}, {res.data(), w}, r, prefix);
    for (std::size_t x = 0; x < w; ++x)
      tmp(x, y) = res[x];
  }
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y)
      line[y] = tmp(x, y);
    box_1d({line.data(), h}, {res.data(), h}, r, prefix);
    for (std::size_t y = 0; y < h; ++y)
      out(x, y) = res[y];
  }
  return out;
}

Image lbp_codes(const Image& band)
{
  static constexpr int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
  static constexpr int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
  const std::size_t w = band.width(), h = band.height();
  Image out(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double c = band(x, y);
      int code = 0;
      for (int k = 0; k < 8; ++k) {
        const double v = band(mirror(static_cast<long>(x) + dx[k], w), mirror(static_cast<long>(y) + dy[k], h));
        code = (code << 1) | (v >= c ? 1 : 0);
      }
      out(x, y) = code;
    }
  return out;
}

FeatureField post_energy(const CoefficientStack& stack, const PostProcessConfig& cfg)
{
  return build(stack, cfg, [](const Image& b) {
    Image e(b.width(), b.height());
    for (std::size_t i = 0; i < b.size(); ++i)
      e.pixels()[i] = b.pixels()[i] * b.pixels()[i];
    return e;
  });
}

FeatureField post_entropy(const CoefficientStack& stack, const PostProcessConfig& cfg)
{
  return build(stack, cfg, [](const Image& b) {
    Image e(b.width(), b.height());
    const auto [lo, hi] = std::minmax_element(b.pixels().begin(), b.pixels().end());
    const double range = *hi - *lo;
    if (!(range > 0.0))
      return e;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double u = (b.pixels()[i] - *lo) / range;
      e.pixels()[i] = u > 0.0 ? -u * std::log(u) : 0.0;
    }
    return e;
  });
}

FeatureField post_lbp(const CoefficientStack& stack, const PostProcessConfig& cfg)
{
  return build(stack, cfg, [](const Image& b) {
    Image c = lbp_codes(b);
    for (double& v : c.pixels())
      v /= 255.0;
    return c;
  });
}

FeatureField post_process(const CoefficientStack& stack, const PostProcessConfig& cfg)
{
  switch (cfg.mode) {
    case PostMode::energy: return post_energy(stack, cfg);
    case PostMode::entropy: return post_entropy(stack, cfg);
    case PostMode::lbp: return post_lbp(stack, cfg);
  }
  throw std::invalid_argument("post_process: unknown mode");
}

void save_feature_field(const FeatureField& f, const std::filesystem::path& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  put_le(os, static_cast<std::uint32_t>(f.width));
  put_le(os, static_cast<std::uint32_t>(f.height));
  put_le(os, static_cast<std::uint32_t>(f.dim));
  for (double v : f.data)
    put_le(os, v);
  if (!os)
    throw std::runtime_error(fmt::format("error while writing '{}'", path.string()));
}

FeatureField load_feature_field(const std::filesystem::path& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  FeatureField f;
  f.width = get_le<std::uint32_t>(is);
  f.height = get_le<std::uint32_t>(is);
  f.dim = get_le<std::uint32_t>(is);
  f.data.resize(f.width * f.height * f.dim);
  for (double& v : f.data)
    v = get_le<double>(is);
  return f;
}

}  // namespace texseg
