#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace texseg {

/// Real-valued grayscale image, row-major. Pipeline inputs hold intensities
/// in [0,1]; intermediate images (texture parts, wavelet bands) are signed.
class Image {
public:
  Image() = default;
  Image(std::size_t width, std::size_t height, double fill = 0.0);
  Image(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return width_ == height_; }

  double& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  double operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

  std::span<double> pixels() { return data_; }
  std::span<const double> pixels() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  double sum() const;
  double mean() const;
  double norm() const;  // L2
  bool all_finite() const;

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Throws std::invalid_argument unless the image is square with side >= 8
/// and all values are finite.
void require_pipeline_image(const Image& img, const char* what);

/// Circular translation by (dx, dy).
Image circular_shift(const Image& img, long dx, long dy);

/// Reads an 8-bit grayscale PGM (P5/P2) or PNG and divides by 255.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit image; values are clamped to [0,1] and rounded to 1/255.
void save_pgm(const Image& img, const std::filesystem::path& path);
void save_png(const Image& img, const std::filesystem::path& path);
/// Picks PGM or PNG from the extension.
void save_image(const Image& img, const std::filesystem::path& path);

/// Affine map onto [0,1] used for displaying signed images.
struct DisplayMap {
  double offset = 0.0;  // display = (value - offset) * scale
  double scale = 1.0;
};
DisplayMap display_map(const Image& img);
Image apply_display_map(const Image& img, const DisplayMap& map);

/// Rounds to the nearest of 256 gray levels.
Image quantize_8bit(const Image& img);

/// 16-bit PGM I/O for integer label maps (maxval up to 65535).
struct LabelImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<int> labels;
};
LabelImage load_label_pgm(const std::filesystem::path& path);
void save_label_pgm(const LabelImage& labels, const std::filesystem::path& path);

}  // namespace texseg
