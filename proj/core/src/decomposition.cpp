#include "texseg/decomposition.hpp"

#include "texseg/diagnostics.hpp"
#include "texseg/ewt.hpp"
#include "texseg/fourier.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace texseg {
namespace {

constexpr int kMaxExtraSweeps = 100;

struct Field {
  Image x, y;
};

// forward differences, periodic
Field gradient(const Image& u)
{
  const std::size_t w = u.width(), h = u.height();
  Field g{Image(w, h), Image(w, h)};
  const double* a = u.pixels().data();
  double* gx = g.x.pixels().data();
  double* gy = g.y.pixels().data();
  for (std::size_t y = 0; y < h; ++y) {
    const double* row = a + y * w;
    const double* next = a + (y + 1 == h ? 0 : y + 1) * w;
    double* ox = gx + y * w;
    double* oy = gy + y * w;
    for (std::size_t x = 0; x + 1 < w; ++x)
      ox[x] = row[x + 1] - row[x];
    ox[w - 1] = row[0] - row[w - 1];
    for (std::size_t x = 0; x < w; ++x)
      oy[x] = next[x] - row[x];
  }
  return g;
}

// negative adjoint of gradient
Image divergence(const Field& p)
{
  const std::size_t w = p.x.width(), h = p.x.height();
  Image d(w, h);
  const double* px = p.x.pixels().data();
  const double* py = p.y.pixels().data();
  double* o = d.pixels().data();
  for (std::size_t y = 0; y < h; ++y) {
    const double* rx = px + y * w;
    const double* ry = py + y * w;
    const double* prev = py + (y == 0 ? h - 1 : y - 1) * w;
    double* out = o + y * w;
    out[0] = rx[0] - rx[w - 1] + ry[0] - prev[0];
    for (std::size_t x = 1; x < w; ++x)
      out[x] = rx[x] - rx[x - 1] + ry[x] - prev[x];
  }
  return d;
}

double sq_distance(const Image& a, const Image& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.pixels()[i] - b.pixels()[i];
    s += d * d;
  }
  return s;
}

double shrink(double x, double t)
{
  if (x > t)
    return x - t;
  if (x < -t)
    return x + t;
  return 0.0;
}

bool finite(const Image& a)
{
  return a.all_finite();
}

// Anisotropic ROF  min |grad u|_1 + (lambda/2)||u - f||^2  by split Bregman,
// with the linear step solved exactly in the Fourier domain. State is kept
// between calls so each u-update is warm-started.
class BregmanSolver {
public:
  BregmanSolver(const Image& start, double lambda)
      : lambda_(lambda), gamma_(2.0 * lambda), u_(start), d_(gradient(start)),
        b_{Image(start.width(), start.height()), Image(start.width(), start.height())},
        denom_(start.size())
  {
    const std::size_t n = start.width(), m = start.height();
    for (std::size_t v = 0; v < m; ++v) {
      const double sy = std::sin(0.5 * bin_frequency(v, m));
      for (std::size_t u = 0; u < n; ++u) {
        const double sx = std::sin(0.5 * bin_frequency(u, n));
        denom_[v * n + u] = lambda_ + gamma_ * 4.0 * (sx * sx + sy * sy);
      }
    }
  }

  const Image& solve(const Image& f, int sweeps)
  {
    const std::size_t w = f.width(), h = f.height();
    for (int it = 0; it < sweeps; ++it) {
      Field q{Image(w, h), Image(w, h)};
      for (std::size_t i = 0; i < f.size(); ++i) {
        q.x.pixels()[i] = d_.x.pixels()[i] - b_.x.pixels()[i];
        q.y.pixels()[i] = d_.y.pixels()[i] - b_.y.pixels()[i];
      }
      // (lambda - gamma Lap) u = lambda f - gamma div(d - b)
      const Image divq = divergence(q);
      Image rhs(w, h);
      for (std::size_t i = 0; i < f.size(); ++i)
        rhs.pixels()[i] = lambda_ * f.pixels()[i] - gamma_ * divq.pixels()[i];
      Spectrum s = forward_spectrum(rhs);
      auto bins = s.bins();
      for (std::size_t i = 0; i < bins.size(); ++i)
        bins[i] /= denom_[i];
      u_ = inverse_spectrum(s);
      const Field g = gradient(u_);
      const double t = 1.0 / gamma_;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double ax = g.x.pixels()[i] + b_.x.pixels()[i];
        const double ay = g.y.pixels()[i] + b_.y.pixels()[i];
        d_.x.pixels()[i] = shrink(ax, t);
        d_.y.pixels()[i] = shrink(ay, t);
        b_.x.pixels()[i] = ax - d_.x.pixels()[i];
        b_.y.pixels()[i] = ay - d_.y.pixels()[i];
      }
    }
    return u_;
  }

private:
  double lambda_;
  double gamma_;
  Image u_;
  Field d_;
  Field b_;
  std::vector<double> denom_;
};

// Projection of f onto {div xi : |xi| <= r componentwise} by projected
// gradient on 0.5 ||div xi - f||^2 (step 1/8, the inverse Lipschitz bound).
Image project_g_ball(const Image& f, Field& xi, double r, int iters)
{
  const double step = 1.0 / 8.0;
  for (int it = 0; it < iters; ++it) {
    Image res = divergence(xi);
    for (std::size_t i = 0; i < f.size(); ++i)
      res.pixels()[i] -= f.pixels()[i];
    const Field g = gradient(res);
    for (std::size_t i = 0; i < f.size(); ++i) {
      xi.x.pixels()[i] = std::clamp(xi.x.pixels()[i] + step * g.x.pixels()[i], -r, r);
      xi.y.pixels()[i] = std::clamp(xi.y.pixels()[i] + step * g.y.pixels()[i], -r, r);
    }
  }
  return divergence(xi);
}

}  // namespace

void DecompositionConfig::validate() const
{
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument(fmt::format("decomposition: mu must be > 0, got {}", mu));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument(fmt::format("decomposition: lambda must be > 0, got {}", lambda));
  if (!(tol > 0.0))
    throw std::invalid_argument(fmt::format("decomposition: tol must be > 0, got {}", tol));
  if (max_outer_iters < 1 || projection_iters < 1 || bregman_iters < 1)
    throw std::invalid_argument("decomposition: iteration counts must be >= 1");
}

DecompositionConfig default_params(const Image& img, std::span<const double> lp_radii)
{
  require_pipeline_image(img, "default_params");
  DecompositionConfig cfg;
  cfg.mu = 0.5 * static_cast<double>(img.width());
  if (lp_radii.empty()) {
    cfg.lambda = std::numbers::pi / 8.0;
    warn("default_params: no EWT2DLP radius detected, using lambda = pi/8");
  } else {
    cfg.lambda = 0.5 * lp_radii.front();
  }
  return cfg;
}

DecompositionConfig default_params(const Image& img)
{
  const auto radii = lp_radii(img);
  return default_params(img, radii);
}

double total_variation(const Image& u)
{
  const Field g = gradient(u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += std::abs(g.x.pixels()[i]) + std::abs(g.y.pixels()[i]);
  return s;
}

double decomposition_objective(const Image& img, const Image& u, const Image& v, double lambda)
{
  double r = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double d = img.pixels()[i] - u.pixels()[i] - v.pixels()[i];
    r += d * d;
  }
  return total_variation(u) + 0.5 * lambda * r;
}

DecompositionResult decompose(const Image& img, const DecompositionConfig& cfg)
{
  require_pipeline_image(img, "decompose");
  cfg.validate();
  const std::size_t w = img.width(), h = img.height();
  const double radius = cfg.mu / static_cast<double>(w);

  Image u = img;
  Image v(w, h);
  Field xi{Image(w, h), Image(w, h)};
  BregmanSolver rof(u, cfg.lambda);
  Image prev_cand = u;

  DecompositionResult out;
  double obj = decomposition_objective(img, u, v, cfg.lambda);
  out.objective.push_back(obj);
  const double scale = std::max(img.norm(), 1e-300);

  int it = 0;
  while (it < cfg.max_outer_iters) {
    ++it;
    // v-update: projection of I - u onto the G-ball
    Image f(w, h);
    for (std::size_t i = 0; i < img.size(); ++i)
      f.pixels()[i] = img.pixels()[i] - u.pixels()[i];
    Image v_new = project_g_ball(f, xi, radius, cfg.projection_iters);

    // u-update: ROF of I - v, accepted only if the objective does not grow
    for (std::size_t i = 0; i < img.size(); ++i)
      f.pixels()[i] = img.pixels()[i] - v_new.pixels()[i];
    const double obj_v = decomposition_objective(img, u, v_new, cfg.lambda);
    const Image* cand = &rof.solve(f, cfg.bregman_iters);
    double obj_c = decomposition_objective(img, *cand, v_new, cfg.lambda);
    // Bregman iterates are not monotone; sweep on until the ROF iterate
    // beats the current u (it does once close enough to the minimizer)
    for (int extra = 0; obj_c > obj_v && extra < kMaxExtraSweeps; ++extra) {
      cand = &rof.solve(f, 1);
      obj_c = decomposition_objective(img, *cand, v_new, cfg.lambda);
    }
    if (!finite(*cand) || !finite(v_new) || !std::isfinite(obj_c))
      throw std::runtime_error(fmt::format("decompose: non-finite value at outer iteration {}", it));
    Image u_new = obj_c <= obj_v ? *cand : u;
    const double obj_new = std::min(obj_c, obj_v);

    // measured on the solver iterate: a rejected candidate is not convergence
    const double change = std::sqrt(sq_distance(*cand, prev_cand) + sq_distance(v_new, v)) / scale;
    prev_cand = *cand;
    u = std::move(u_new);
    v = std::move(v_new);
    obj = obj_new;
    out.objective.push_back(obj);
    if (change < cfg.tol)
      break;
  }

  Image r(w, h);
  for (std::size_t i = 0; i < img.size(); ++i)
    r.pixels()[i] = img.pixels()[i] - u.pixels()[i] - v.pixels()[i];
  out.residual_norm = r.norm();
  out.iterations_used = it;
  out.cartoon = std::move(u);
  out.texture = std::move(v);
  return out;
}

}  // namespace texseg
