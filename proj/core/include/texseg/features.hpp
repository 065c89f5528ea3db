#pragma once

#include "texseg/filter_bank.hpp"
#include "texseg/image.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace texseg {

enum class PostMode { energy, entropy, lbp };

const char* to_string(PostMode m);
PostMode parse_post_mode(std::string_view name);

struct PostProcessConfig {
  PostMode mode = PostMode::energy;
  int window = 19;  // odd side of the local-mean window
  bool drop_lowpass = true;

  /// LBP codes are averaged over a 35-pixel window by default.
  static PostProcessConfig lbp() { return {PostMode::lbp, 35, true}; }
  void validate() const;
};

/// Per-pixel feature vectors, pixel-major: data[(y * width + x) * dim + k].
struct FeatureField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  std::size_t pixels() const { return width * height; }
  std::span<const double> at(std::size_t pixel) const { return {data.data() + pixel * dim, dim}; }
  std::span<double> at(std::size_t pixel) { return {data.data() + pixel * dim, dim}; }
};

/// Box mean over a window x window neighbourhood; outside pixels are taken
/// from the mirror image about the border (x[-1] = x[0]).
Image local_mean(const Image& band, int window);

/// 8-neighbour code: a bit is set when the neighbour is >= the center.
/// Neighbours are read clockwise from the top-left, which is the most
/// significant bit. Borders use the same mirror rule as local_mean.
Image lbp_codes(const Image& band);

FeatureField post_energy(const CoefficientStack& stack, const PostProcessConfig& cfg);
FeatureField post_entropy(const CoefficientStack& stack, const PostProcessConfig& cfg);
FeatureField post_lbp(const CoefficientStack& stack, const PostProcessConfig& cfg);
/// Dispatches on cfg.mode.
FeatureField post_process(const CoefficientStack& stack, const PostProcessConfig& cfg);

/// Binary dump: width, height, dim as little-endian uint32, then
/// width * height * dim little-endian float64 values.
void save_feature_field(const FeatureField& f, const std::filesystem::path& path);
FeatureField load_feature_field(const std::filesystem::path& path);

}  // namespace texseg
