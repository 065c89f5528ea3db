#pragma once

#include "texseg/image.hpp"

#include <cstddef>
#include <filesystem>
#include <vector>

namespace texseg {

/// Per-pixel label map with labels in [0, k). Used both for segmentations
/// and for ground truths.
class Partition {
public:
  Partition() = default;
  /// Labels are taken as-is; k defaults to max label + 1.
  Partition(std::size_t width, std::size_t height, std::vector<int> labels, int k = -1);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return labels_.size(); }
  int k() const { return k_; }

  int operator()(std::size_t x, std::size_t y) const { return labels_[y * width_ + x]; }
  const std::vector<int>& labels() const { return labels_; }

  /// Pixel count per label; sums to width * height.
  std::vector<std::size_t> inventory() const;
  /// Number of labels that own at least one pixel.
  std::size_t region_count() const;

  /// Relabels to 0..m-1 in order of first appearance (raster scan).
  Partition compacted() const;

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  int k_ = 0;
  std::vector<int> labels_;
};

/// Reads a label map written as PGM (8- or 16-bit); labels are compacted.
Partition load_partition(const std::filesystem::path& path);
void save_partition(const Partition& p, const std::filesystem::path& path);

}  // namespace texseg
