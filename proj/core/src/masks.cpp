#include "texseg/harness.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace texseg {
namespace {

constexpr double kPi = std::numbers::pi;

using LabelFn = int (*)(double x, double y);  // x, y in [0, 1)

int halves(double x, double)
{
  return x < 0.5 ? 0 : 1;
}

int disk(double x, double y)
{
  const double dx = x - 0.5, dy = y - 0.5;
  return dx * dx + dy * dy < 0.3 * 0.3 ? 1 : 0;
}

int stripes(double x, double y)
{
  // three horizontal bands with gently curved borders
  const double b1 = 0.33 + 0.04 * std::sin(2.0 * kPi * x);
  const double b2 = 0.66 - 0.04 * std::sin(2.0 * kPi * x);
  return y < b1 ? 0 : (y < b2 ? 1 : 2);
}

int wedge(double x, double y)
{
  // three sectors meeting at the center: a "Y" layout
  const double a = std::atan2(y - 0.5, x - 0.5);  // (-pi, pi]
  if (a >= -kPi / 2.0 && a < kPi / 6.0)
    return 0;
  if (a >= kPi / 6.0 && a < 5.0 * kPi / 6.0)
    return 1;
  return 2;
}

int quadrants(double x, double y)
{
  return (y < 0.5 ? 0 : 2) + (x < 0.5 ? 0 : 1);
}

int diagonal(double x, double y)
{
  const double s = 0.5 * (x + y);  // in [0, 1)
  return s < 0.3 ? 0 : (s < 0.5 ? 1 : (s < 0.7 ? 2 : 3));
}

int quadrants_disk(double x, double y)
{
  const double dx = x - 0.5, dy = y - 0.5;
  if (dx * dx + dy * dy < 0.2 * 0.2)
    return 4;
  return quadrants(x, y);
}

int cross_blob(double x, double y)
{
  const double dx = x - 0.75, dy = y - 0.75;
  if (dx * dx / (0.16 * 0.16) + dy * dy / (0.12 * 0.12) < 1.0)
    return 2;
  if (std::abs(x - 0.35) < 0.12 || std::abs(y - 0.35) < 0.12)
    return 1;
  return 0;
}

struct MaskDef {
  const char* name;
  LabelFn fn;
};

const MaskDef kMasks[] = {
    {"halves", halves},       {"disk", disk},         {"stripes", stripes},
    {"wedge", wedge},         {"quadrants", quadrants}, {"diagonal", diagonal},
    {"quadrants_disk", quadrants_disk}, {"cross_blob", cross_blob},
};

}  // namespace

const std::vector<std::string>& mask_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& m : kMasks)
      v.emplace_back(m.name);
    return v;
  }();
  return names;
}

Partition make_mask(std::string_view name, std::size_t n)
{
  if (n < 8)
    throw std::invalid_argument(fmt::format("make_mask: size must be >= 8, got {}", n));
  for (const auto& m : kMasks) {
    if (name != m.name)
      continue;
    std::vector<int> labels(n * n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x)
        labels[y * n + x] = m.fn((static_cast<double>(x) + 0.5) * inv, (static_cast<double>(y) + 0.5) * inv);
    return Partition(n, n, std::move(labels)).compacted();
  }
  throw std::invalid_argument(fmt::format("unknown mask '{}'", name));
}

}  // namespace texseg
