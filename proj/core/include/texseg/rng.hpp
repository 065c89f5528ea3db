#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>

namespace texseg {

/// splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one (cell, image) job, independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t image)
{
  return splitmix64(splitmix64(splitmix64(master) ^ cell) ^ image);
}

/// mt19937_64 with its own uniform helpers: the standard distributions are
/// implementation-defined, which would make outputs differ between
/// standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased.
  std::size_t index(std::size_t n)
  {
    if (n == 0)
      throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
  }

  /// Standard normal (Box-Muller, one value per call).
  double normal()
  {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace texseg
