#include "texseg/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace texseg {
namespace {

// FFTW's planner is not thread-safe, fftw_execute_dft on an existing plan is.
// Plans are created once per (shape, direction) and executed on per-call
// buffers that share FFTW's alignment.
class PlanCache {
public:
  static PlanCache& instance()
  {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rank, int n0, int n1, int sign)
  {
    const auto key = std::make_tuple(rank, n0, n1, sign);
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end())
      return it->second;
    const std::size_t n = static_cast<std::size_t>(n0) * static_cast<std::size_t>(rank == 2 ? n1 : 1);
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = rank == 2
      ? fftw_plan_dft_2d(n0, n1, in, out, sign, FFTW_ESTIMATE)
      : fftw_plan_dft_1d(n0, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (!plan)
      throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache()
  {
    for (auto& [key, plan] : plans_)
      fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n)
  {
    if (!data)
      throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* data;
  std::size_t size;
};

std::size_t wrap(long i, std::size_t n)
{
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

// Natural-order index of centered bin u on an axis of length n.
std::size_t natural_index(std::size_t u, std::size_t n)
{
  return wrap(static_cast<long>(u) - static_cast<long>(n / 2), n);
}

void execute_2d(fftw_complex* in, fftw_complex* out, std::size_t w, std::size_t h, int sign)
{
  fftw_plan plan = PlanCache::instance().get(2, static_cast<int>(h), static_cast<int>(w), sign);
  fftw_execute_dft(plan, in, out);
}

Image inverse_natural_order(const Spectrum& spec, std::span<const double> mask)
{
  const std::size_t w = spec.width();
  const std::size_t h = spec.height();
  FftwBuffer in(w * h);
  FftwBuffer out(w * h);
  for (std::size_t v = 0; v < h; ++v) {
    const std::size_t nv = natural_index(v, h);
    for (std::size_t u = 0; u < w; ++u) {
      const std::size_t nu = natural_index(u, w);
      std::complex<double> c = spec(u, v);
      if (!mask.empty())
        c *= mask[v * w + u];
      in.data[nv * w + nu][0] = c.real();
      in.data[nv * w + nu][1] = c.imag();
    }
  }
  execute_2d(in.data, out.data, w, h, FFTW_BACKWARD);
  Image img(w, h);
  const double scale = 1.0 / static_cast<double>(w * h);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = out.data[i][0] * scale;
  return img;
}

}  // namespace

Spectrum::Spectrum(std::size_t width, std::size_t height)
  : width_(width), height_(height), data_(width * height)
{
}

Spectrum forward_spectrum(const Image& img)
{
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  if (w == 0 || h == 0)
    throw std::invalid_argument("forward_spectrum: empty image");
  FftwBuffer in(w * h);
  FftwBuffer out(w * h);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    in.data[i][0] = px[i];
    in.data[i][1] = 0.0;
  }
  execute_2d(in.data, out.data, w, h, FFTW_FORWARD);
  Spectrum spec(w, h);
  for (std::size_t v = 0; v < h; ++v) {
    const std::size_t nv = natural_index(v, h);
    for (std::size_t u = 0; u < w; ++u) {
      const std::size_t nu = natural_index(u, w);
      spec(u, v) = {out.data[nv * w + nu][0], out.data[nv * w + nu][1]};
    }
  }
  return spec;
}

Image inverse_spectrum(const Spectrum& spec)
{
  return inverse_natural_order(spec, {});
}

Image filter_spectrum(const Spectrum& spec, std::span<const double> mask)
{
  if (mask.size() != spec.size())
    throw std::invalid_argument("filter_spectrum: mask size does not match spectrum");
  return inverse_natural_order(spec, mask);
}

std::vector<std::complex<double>> dft_1d(std::span<const std::complex<double>> x, bool inverse)
{
  const std::size_t n = x.size();
  if (n == 0)
    throw std::invalid_argument("dft_1d: empty signal");
  FftwBuffer in(n);
  FftwBuffer out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.data[i][0] = x[i].real();
    in.data[i][1] = x[i].imag();
  }
  fftw_plan plan = PlanCache::instance().get(1, static_cast<int>(n), 0, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  fftw_execute_dft(plan, in.data, out.data);
  const double scale = inverse ? 1.0 / static_cast<double>(n) : 1.0;
  std::vector<std::complex<double>> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = {out.data[i][0] * scale, out.data[i][1] * scale};
  return y;
}

std::vector<double> half_magnitude_spectrum(std::span<const double> signal)
{
  const std::size_t n = signal.size();
  if (n == 0)
    throw std::invalid_argument("half_magnitude_spectrum: empty signal");
  FftwBuffer in(n);
  FftwBuffer out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.data[i][0] = signal[i];
    in.data[i][1] = 0.0;
  }
  fftw_plan plan = PlanCache::instance().get(1, static_cast<int>(n), 0, FFTW_FORWARD);
  fftw_execute_dft(plan, in.data, out.data);
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k)
    mag[k] = std::hypot(out.data[k][0], out.data[k][1]);
  return mag;
}

std::vector<double> mean_row_magnitude(const Image& img)
{
  const std::size_t w = img.width();
  std::vector<double> acc(w / 2 + 1, 0.0);
  std::vector<double> row(w);
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < w; ++x)
      row[x] = img(x, y);
    const auto mag = half_magnitude_spectrum(row);
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc[k] += mag[k];
  }
  for (double& a : acc)
    a /= static_cast<double>(img.height());
  return acc;
}

std::vector<double> mean_column_magnitude(const Image& img)
{
  const std::size_t h = img.height();
  std::vector<double> acc(h / 2 + 1, 0.0);
  std::vector<double> col(h);
  for (std::size_t x = 0; x < img.width(); ++x) {
    for (std::size_t y = 0; y < h; ++y)
      col[y] = img(x, y);
    const auto mag = half_magnitude_spectrum(col);
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc[k] += mag[k];
  }
  for (double& a : acc)
    a /= static_cast<double>(img.width());
  return acc;
}

double PolarSpectrum::radius_of(std::size_t i) const
{
  return std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_radii - 1);
}

double PolarSpectrum::angle_of(std::size_t j) const
{
  return -std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_angles);
}

PolarSpectrum polar_resample(const Spectrum& spec, std::size_t n_radii, std::size_t n_angles)
{
  if (n_radii < 32)
    throw std::invalid_argument("polar_resample: n_radii must be at least 32");
  if (n_angles < 64 || n_angles % 2 != 0)
    throw std::invalid_argument("polar_resample: n_angles must be even and at least 64");

  const std::size_t w = spec.width();
  const std::size_t h = spec.height();
  std::vector<double> mag(spec.size());
  for (std::size_t i = 0; i < mag.size(); ++i)
    mag[i] = std::abs(spec.bins()[i]);

  PolarSpectrum polar;
  polar.n_radii = n_radii;
  polar.n_angles = n_angles;
  polar.magnitude.assign(n_radii * n_angles, 0.0);

  const double cu = static_cast<double>(w / 2);
  const double cv = static_cast<double>(h / 2);
  const double su = static_cast<double>(w) / (2 * std::numbers::pi);
  const double sv = static_cast<double>(h) / (2 * std::numbers::pi);
  for (std::size_t j = 0; j < n_angles; ++j) {
    const double theta = polar.angle_of(j);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t i = 0; i < n_radii; ++i) {
      const double r = polar.radius_of(i);
      const double fu = cu + r * c * su;
      const double fv = cv + r * s * sv;
      const double u0 = std::floor(fu);
      const double v0 = std::floor(fv);
      const double tu = fu - u0;
      const double tv = fv - v0;
      const std::size_t a0 = wrap(static_cast<long>(u0), w);
      const std::size_t a1 = wrap(static_cast<long>(u0) + 1, w);
      const std::size_t b0 = wrap(static_cast<long>(v0), h);
      const std::size_t b1 = wrap(static_cast<long>(v0) + 1, h);
      const double value = (1 - tu) * (1 - tv) * mag[b0 * w + a0] + tu * (1 - tv) * mag[b0 * w + a1]
        + (1 - tu) * tv * mag[b1 * w + a0] + tu * tv * mag[b1 * w + a1];
      polar.magnitude[i * n_angles + j] = value;
    }
  }
  return polar;
}

PolarSpectrum polar_resample(const Spectrum& spec)
{
  const std::size_t n = std::min(spec.width(), spec.height());
  return polar_resample(spec, std::max<std::size_t>(32, n / 2), 360);
}

}  // namespace texseg
