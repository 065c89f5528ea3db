#include "texseg/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace texseg {

Partition::Partition(std::size_t width, std::size_t height, std::vector<int> labels, int k)
  : width_(width), height_(height), labels_(std::move(labels))
{
  if (labels_.size() != width_ * height_)
    throw std::invalid_argument("Partition: label count does not match dimensions");
  int maxlabel = -1;
  for (int l : labels_) {
    if (l < 0)
      throw std::invalid_argument("Partition: labels must be non-negative");
    maxlabel = std::max(maxlabel, l);
  }
  k_ = k < 0 ? maxlabel + 1 : k;
  if (maxlabel >= k_)
    throw std::invalid_argument("Partition: label out of range [0, k)");
}

std::vector<std::size_t> Partition::inventory() const
{
  std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
  for (int l : labels_)
    ++counts[static_cast<std::size_t>(l)];
  return counts;
}

std::size_t Partition::region_count() const
{
  const auto counts = inventory();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

Partition Partition::compacted() const
{
  std::unordered_map<int, int> remap;
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels_[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return Partition(width_, height_, std::move(out), static_cast<int>(remap.size()));
}

Partition load_partition(const std::filesystem::path& path)
{
  LabelImage raw = load_label_pgm(path);
  return Partition(raw.width, raw.height, std::move(raw.labels)).compacted();
}

void save_partition(const Partition& p, const std::filesystem::path& path)
{
  save_label_pgm(LabelImage{p.width(), p.height(), p.labels()}, path);
}

}  // namespace texseg
