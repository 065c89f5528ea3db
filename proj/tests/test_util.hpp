#pragma once

#include "texseg/filter_bank.hpp"
#include "texseg/fourier.hpp"
#include "texseg/image.hpp"
#include "texseg/rng.hpp"

#include <cmath>
#include <numbers>

namespace texseg::test {

inline constexpr double pi = std::numbers::pi;

inline Image random_image(std::size_t n, std::uint64_t seed)
{
  Rng rng(seed);
  Image img(n, n);
  for (double& v : img.pixels())
    v = rng.uniform();
  return img;
}

inline double sum_squares(const Image& img)
{
  double s = 0.0;
  for (double v : img.pixels())
    s += v * v;
  return s;
}

inline Image minus_mean(const Image& img)
{
  Image out = img;
  const double m = img.mean();
  for (double& v : out.pixels())
    v -= m;
  return out;
}

inline double relative_error(const Image& a, const Image& b)
{
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a.pixels()[i] - b.pixels()[i]) * (a.pixels()[i] - b.pixels()[i]);
    den += b.pixels()[i] * b.pixels()[i];
  }
  return std::sqrt(num / den);
}

// Fraction of the non-DC energy carried by each band (Parseval on the
// zero-mean input, bands of a tight frame).
inline std::vector<double> band_energy_fractions(const CoefficientStack& s, const Image& img)
{
  const double total = sum_squares(minus_mean(img));
  std::vector<double> out;
  for (const auto& b : s.bands)
    out.push_back(sum_squares(minus_mean(b)) / total);
  return out;
}

}  // namespace texseg::test
