#include "texseg/ewt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace texseg {
namespace {

constexpr double kPi = std::numbers::pi;

// Sampled Gaussian of variance 1/2; one scale-space step.
const std::array<double, 7>& blur_kernel()
{
  static const std::array<double, 7> k = [] {
    std::array<double, 7> a{};
    double s = 0.0;
    for (int i = -3; i <= 3; ++i) {
      a[i + 3] = std::exp(-static_cast<double>(i * i));
      s += a[i + 3];
    }
    for (double& v : a)
      v /= s;
    return a;
  }();
  return k;
}

std::size_t reflect(long i, std::size_t n)
{
  const long last = static_cast<long>(n) - 1;
  while (i < 0 || i > last) {
    if (i < 0)
      i = -i;
    if (i > last)
      i = 2 * last - i;
  }
  return static_cast<std::size_t>(i);
}

std::size_t wrap(long i, std::size_t n)
{
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

std::vector<double> blur(const std::vector<double>& x, bool periodic)
{
  const auto& k = blur_kernel();
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = -3; j <= 3; ++j) {
      const long idx = static_cast<long>(i) + j;
      s += k[j + 3] * x[periodic ? wrap(idx, n) : reflect(idx, n)];
    }
    y[i] = s;
  }
  return y;
}

// Strict minima; a flat run counts when both neighbours are larger, located
// at the run's center. Endpoints are excluded.
std::vector<double> linear_minima(const std::vector<double>& x)
{
  std::vector<double> out;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i] < x[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n && x[j + 1] == x[i])
        ++j;
      if (j + 1 < n && x[j + 1] > x[i])
        out.push_back(0.5 * static_cast<double>(i + j));
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<double> local_minima(const std::vector<double>& x, bool periodic)
{
  if (!periodic)
    return linear_minima(x);
  const std::size_t n = x.size();
  const std::size_t g = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
  // rotate so the sequence starts and ends on the global maximum
  std::vector<double> y(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    y[k] = x[(g + k) % n];
  std::vector<double> out;
  for (double p : linear_minima(y))
    out.push_back(std::fmod(p + static_cast<double>(g), static_cast<double>(n)));
  std::sort(out.begin(), out.end());
  return out;
}

double seq_distance(double a, double b, std::size_t n, bool periodic)
{
  double d = std::abs(a - b);
  if (periodic)
    d = std::min(d, static_cast<double>(n) - d);
  return d;
}

// Otsu split of integer lifetimes; returns the threshold t (keep > t).
long otsu_threshold(const std::vector<long>& lengths)
{
  std::vector<long> values(lengths);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < 2)
    return values.empty() || values.front() > 0 ? -1 : values.front();
  const double total = static_cast<double>(lengths.size());
  double best = -1.0;
  long best_t = values.front();
  for (std::size_t c = 0; c + 1 < values.size(); ++c) {
    const long t = values[c];
    double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (long l : lengths) {
      if (l <= t) {
        n0 += 1;
        s0 += static_cast<double>(l);
      } else {
        n1 += 1;
        s1 += static_cast<double>(l);
      }
    }
    const double m0 = s0 / n0, m1 = s1 / n1;
    const double between = (n0 / total) * (n1 / total) * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

std::size_t arg_extreme(const std::vector<double>& x, long from, long to, bool periodic, bool want_max)
{
  // inclusive range [from, to]; indices wrap when periodic
  const std::size_t n = x.size();
  double best = 0.0;
  bool have = false;
  long first_k = 0, last_k = 0;
  for (long k = from; k <= to; ++k) {
    const std::size_t idx = periodic ? wrap(k, n) : static_cast<std::size_t>(k);
    const double v = x[idx];
    const bool better = !have || (want_max ? v > best : v < best);
    if (better) {
      best = v;
      first_k = last_k = k;
      have = true;
    } else if (v == best && k == last_k + 1) {
      last_k = k;
    }
  }
  const long mid = (first_k + last_k) / 2;
  return periodic ? wrap(mid, n) : static_cast<std::size_t>(mid);
}

long unwrap_after(long idx, long ref, long n)
{
  while (idx < ref)
    idx += n;
  return idx;
}

// Moves each kept minimum to the lowest sample between the maxima that
// bracket it.
std::vector<double> refine_minima(const std::vector<double>& x, std::vector<double> kept, bool periodic)
{
  if (kept.empty())
    return kept;
  std::sort(kept.begin(), kept.end());
  const long n = static_cast<long>(x.size());
  const std::size_t k = kept.size();
  std::vector<long> m(k);
  for (std::size_t i = 0; i < k; ++i)
    m[i] = std::lround(kept[i]);
  std::vector<double> out;
  if (!periodic) {
    std::vector<long> maxima(k + 1);
    maxima[0] = static_cast<long>(arg_extreme(x, 0, m[0], false, true));
    for (std::size_t i = 1; i < k; ++i)
      maxima[i] = static_cast<long>(arg_extreme(x, m[i - 1], m[i], false, true));
    maxima[k] = static_cast<long>(arg_extreme(x, m[k - 1], n - 1, false, true));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t b = arg_extreme(x, maxima[i], maxima[i + 1], false, false);
      if (b > 0 && static_cast<long>(b) < n - 1)
        out.push_back(static_cast<double>(b));
    }
  } else {
    std::vector<long> maxima(k);
    for (std::size_t i = 0; i < k; ++i) {
      const long a = m[i];
      const long b = i + 1 < k ? m[i + 1] : m[0] + n;
      maxima[i] = static_cast<long>(arg_extreme(x, a, b, true, true));
    }
    for (std::size_t i = 0; i < k; ++i) {
      const long a = maxima[(i + k - 1) % k];
      const long b = unwrap_after(maxima[i], a + (k == 1 ? 1 : 0), n);
      out.push_back(static_cast<double>(arg_extreme(x, a, b, true, false)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> flushed(std::span<const double> seq)
{
  double mx = 0.0;
  for (double v : seq) {
    if (!std::isfinite(v))
      throw std::invalid_argument("boundary detection: non-finite magnitude");
    mx = std::max(mx, std::abs(v));
  }
  std::vector<double> y(seq.begin(), seq.end());
  for (double& v : y)
    if (std::abs(v) <= 1e-10 * mx)
      v = 0.0;
  return y;
}

void require_even_square(const Image& img, const char* what)
{
  require_pipeline_image(img, what);
  if (img.width() % 2 != 0)
    throw std::invalid_argument(fmt::format("{}: image side must be even, got {}", what, img.width()));
}

double radius_of_position(double p, std::size_t n)
{
  return kPi * p / static_cast<double>(n - 1);
}

std::vector<double> radial_profile(const PolarSpectrum& ps)
{
  std::vector<double> prof(ps.n_radii, 0.0);
  for (std::size_t i = 0; i < ps.n_radii; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ps.n_angles; ++j)
      s += ps.at(i, j);
    prof[i] = s / static_cast<double>(ps.n_angles);
  }
  return prof;
}

std::vector<double> angular_profile(const PolarSpectrum& ps, double r_lo, double r_hi, bool include_lo)
{
  std::vector<double> prof(ps.n_angles, 0.0);
  std::size_t count = 0;
  for (std::size_t i = 1; i < ps.n_radii; ++i) {
    const double r = ps.radius_of(i);
    if (r < r_lo || r > r_hi || (!include_lo && r == r_lo))
      continue;
    ++count;
    for (std::size_t j = 0; j < ps.n_angles; ++j)
      prof[j] += ps.at(i, j);
  }
  if (count == 0)
    return {};
  for (double& v : prof)
    v /= static_cast<double>(count);
  return prof;
}

AngularSectors sectors_from(const std::vector<double>& profile)
{
  if (profile.empty())
    return AngularSectors{};
  return AngularSectors(detect_angle_boundaries(profile));
}

}  // namespace

std::vector<double> persistent_minima(std::span<const double> seq, bool periodic)
{
  const std::size_t n = seq.size();
  if (n < 4)
    return {};
  std::vector<double> cur(seq.begin(), seq.end());
  struct Chain {
    double origin, pos;
    long length;
    bool alive;
  };
  std::vector<Chain> chains;
  for (double p : local_minima(cur, periodic))
    chains.push_back({p, p, 0, true});
  if (chains.empty())
    return {};

  const long steps = std::max<long>(1, 2 * static_cast<long>(n / 3));
  for (long step = 1; step <= steps; ++step) {
    cur = blur(cur, periodic);
    const auto mins = local_minima(cur, periodic);
    std::vector<bool> claimed(mins.size(), false);
    bool any = false;
    for (auto& c : chains) {
      if (!c.alive)
        continue;
      double best = 2.0 + 1e-9;
      std::size_t pick = mins.size();
      for (std::size_t q = 0; q < mins.size(); ++q) {
        if (claimed[q])
          continue;
        const double d = seq_distance(c.pos, mins[q], n, periodic);
        if (d < best) {
          best = d;
          pick = q;
        }
      }
      if (pick == mins.size()) {
        c.alive = false;
        continue;
      }
      claimed[pick] = true;
      c.pos = mins[pick];
      ++c.length;
      any = true;
    }
    if (!any)
      break;
  }

  std::vector<long> lengths;
  for (const auto& c : chains)
    lengths.push_back(c.length);
  const long t = otsu_threshold(lengths);
  std::vector<double> kept;
  for (const auto& c : chains)
    if (c.length > t)
      kept.push_back(c.origin);
  return refine_minima(std::vector<double>(seq.begin(), seq.end()), std::move(kept), periodic);
}

BoundarySet detect_boundaries_1d(std::span<const double> mag)
{
  const std::size_t n = mag.size();
  if (n < 16)
    throw std::invalid_argument(fmt::format("detect_boundaries_1d: need at least 16 samples, got {}", n));
  const auto y = flushed(mag);
  std::vector<double> interior;
  if (std::any_of(y.begin(), y.end(), [](double v) { return v != 0.0; })) {
    for (double p : persistent_minima(y, false))
      interior.push_back(radius_of_position(p, n));
    if (interior.empty()) {
      const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
      if (peak >= 2)
        interior.push_back(radius_of_position(0.5 * static_cast<double>(peak), n));
    }
  }
  return make_boundary_set(std::move(interior));
}

std::vector<double> detect_angle_boundaries(std::span<const double> profile)
{
  const std::size_t n = profile.size();
  if (n < 16)
    throw std::invalid_argument(fmt::format("detect_angle_boundaries: need at least 16 samples, got {}", n));
  const auto y = flushed(profile);
  std::vector<double> out;
  for (double p : persistent_minima(y, true))
    out.push_back(-0.5 * kPi + kPi * p / static_cast<double>(n));
  return out;
}

FourierPartition detect_tensor_partition(const Image& img)
{
  require_even_square(img, "ewt2d_tensor");
  FourierPartition p;
  p.kind = PartitionKind::tensor;
  p.radial.push_back(detect_boundaries_1d(mean_row_magnitude(img)));
  p.radial.push_back(detect_boundaries_1d(mean_column_magnitude(img)));
  return p;
}

FourierPartition detect_lp_partition(const Spectrum& spec)
{
  const PolarSpectrum ps = polar_resample(spec);
  FourierPartition p;
  p.kind = PartitionKind::littlewood_paley;
  p.radial.push_back(detect_boundaries_1d(radial_profile(ps)));
  return p;
}

FourierPartition detect_curvelet_partition(const Spectrum& spec, int option)
{
  if (option < 1 || option > 3)
    throw std::invalid_argument(fmt::format("ewt2d_curvelet: option must be 1, 2 or 3, got {}", option));
  const PolarSpectrum ps = polar_resample(spec);
  const BoundarySet global = detect_boundaries_1d(radial_profile(ps));
  const double w1 = global.omega.size() > 2 ? global.omega[1] : 0.0;

  FourierPartition p;
  p.kind = option == 1 ? PartitionKind::curvelet1 : option == 2 ? PartitionKind::curvelet2 : PartitionKind::curvelet3;

  if (option == 2) {
    p.radial.push_back(global);
    for (std::size_t m = 1; m < global.modes(); ++m)
      p.angular.push_back(sectors_from(angular_profile(ps, global.omega[m], global.omega[m + 1], m > 1)));
    return p;
  }

  const AngularSectors sectors = sectors_from(angular_profile(ps, w1, kPi, false));
  p.angular.push_back(sectors);
  if (option == 1 || w1 == 0.0) {
    if (option == 1) {
      p.radial.push_back(global);
    } else {
      // no low-frequency disk to share: every sector keeps the global rings
      p.radial.assign(sectors.count(), global);
    }
    return p;
  }

  const double dr = kPi / static_cast<double>(ps.n_radii - 1);
  std::vector<std::vector<double>> interiors;
  double gamma = 1.0;
  for (std::size_t s = 0; s < sectors.count(); ++s) {
    const double lo = sectors.lower(s);
    const double hi = sectors.upper(s);
    std::vector<double> prof(ps.n_radii, 0.0);
    std::size_t count = 0;
    for (std::size_t j = 0; j < ps.n_angles; ++j) {
      double t = ps.angle_of(j);
      while (t < lo)
        t += kPi;
      while (t >= lo + kPi)
        t -= kPi;
      if (t >= hi)
        continue;
      ++count;
      for (std::size_t i = 0; i < ps.n_radii; ++i)
        prof[i] += ps.at(i, j);
    }
    std::vector<double> interior{w1};
    if (count > 0) {
      for (double pos : persistent_minima(flushed(prof), false)) {
        const double r = radius_of_position(pos, ps.n_radii);
        if (r > w1 + 2.0 * dr)
          interior.push_back(r);
      }
    }
    gamma = std::min(gamma, max_transition_ratio(interior));
    interiors.push_back(std::move(interior));
  }
  gamma *= kTransitionSafety;
  for (auto& in : interiors)
    p.radial.push_back(make_boundary_set(std::move(in), gamma));
  return p;
}

FilterBank build_bank(const FourierPartition& partition, std::size_t n)
{
  switch (partition.kind) {
    case PartitionKind::tensor:
      return tensor_bank(n, n, partition.radial.at(0), partition.radial.at(1));
    case PartitionKind::littlewood_paley:
    case PartitionKind::meyer:
      return ring_bank(n, partition.radial.at(0), partition.kind);
    case PartitionKind::curvelet1:
    case PartitionKind::curvelet2:
    case PartitionKind::curvelet3:
    case PartitionKind::prescribed_curvelet:
      return polar_bank(n, partition);
    default:
      throw std::invalid_argument(fmt::format("build_bank: no Fourier bank for partition kind {}", to_string(partition.kind)));
  }
}

EwtTransform ewt2d_tensor(const Image& img)
{
  EwtTransform t;
  t.bank = build_bank(detect_tensor_partition(img), img.width());
  t.stack = apply_filter_bank(img, t.bank);
  return t;
}

EwtTransform ewt2d_lp(const Image& img)
{
  require_even_square(img, "ewt2d_lp");
  const Spectrum spec = forward_spectrum(img);
  EwtTransform t;
  t.bank = build_bank(detect_lp_partition(spec), img.width());
  t.stack = apply_filter_bank(spec, t.bank);
  return t;
}

EwtTransform ewt2d_curvelet(const Image& img, int option)
{
  require_even_square(img, "ewt2d_curvelet");
  const Spectrum spec = forward_spectrum(img);
  EwtTransform t;
  t.bank = build_bank(detect_curvelet_partition(spec, option), img.width());
  t.stack = apply_filter_bank(spec, t.bank);
  return t;
}

std::vector<double> lp_radii(const Image& img)
{
  require_even_square(img, "lp_radii");
  return detect_lp_partition(forward_spectrum(img)).radial.front().interior();
}

Ewt1D ewt1d(std::span<const double> signal)
{
  const std::size_t n = signal.size();
  if (n < 30 || n % 2 != 0)
    throw std::invalid_argument(fmt::format("ewt1d: need an even length >= 30, got {}", n));
  Ewt1D t;
  t.boundaries = detect_boundaries_1d(half_magnitude_spectrum(signal));
  t.filters = build_filter_bank_1d(t.boundaries).sample(n);
  std::vector<std::complex<double>> x(signal.begin(), signal.end());
  const auto spec = dft_1d(x);
  for (const auto& f : t.filters) {
    std::vector<std::complex<double>> y(n);
    for (std::size_t k = 0; k < n; ++k)
      y[k] = spec[k] * f[k];
    const auto band = dft_1d(y, true);
    std::vector<double> re(n);
    for (std::size_t k = 0; k < n; ++k)
      re[k] = band[k].real();
    t.bands.push_back(std::move(re));
  }
  return t;
}

std::vector<double> ewt1d_reconstruct(const Ewt1D& t)
{
  if (t.bands.empty() || t.bands.size() != t.filters.size())
    throw std::invalid_argument("ewt1d_reconstruct: bands and filters disagree");
  const std::size_t n = t.bands.front().size();
  std::vector<std::complex<double>> acc(n);
  for (std::size_t m = 0; m < t.bands.size(); ++m) {
    std::vector<std::complex<double>> x(t.bands[m].begin(), t.bands[m].end());
    const auto s = dft_1d(x);
    for (std::size_t k = 0; k < n; ++k)
      acc[k] += t.filters[m][k] * s[k];
  }
  const auto y = dft_1d(acc, true);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = y[k].real();
  return out;
}

double tightness_error(const Ewt1D& t)
{
  if (t.filters.empty())
    return 1.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < t.filters.front().size(); ++k) {
    double s = 0.0;
    for (const auto& f : t.filters)
      s += f[k] * f[k];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace texseg
