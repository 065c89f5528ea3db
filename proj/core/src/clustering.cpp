#include "texseg/clustering.hpp"

#include "texseg/diagnostics.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace texseg {
namespace {

double raw_distance(std::span<const double> a, std::span<const double> b, Distance kind, bool& degenerate)
{
  const std::size_t n = a.size();
  switch (kind) {
    case Distance::euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(s);
    }
    case Distance::cityblock: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += std::abs(a[i] - b[i]);
      return s;
    }
    case Distance::cosine: {
      double ab = 0.0, aa = 0.0, bb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
      }
      if (aa == 0.0 || bb == 0.0) {
        degenerate = true;
        return 1.0;
      }
      return 1.0 - ab / std::sqrt(aa * bb);
    }
    case Distance::correlation: {
      double ma = 0.0, mb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
      }
      ma /= static_cast<double>(n);
      mb /= static_cast<double>(n);
      double ab = 0.0, aa = 0.0, bb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        ab += da * db;
        aa += da * da;
        bb += db * db;
      }
      if (aa == 0.0 || bb == 0.0) {
        degenerate = true;
        return 1.0;
      }
      return 1.0 - ab / std::sqrt(aa * bb);
    }
  }
  throw std::invalid_argument("unknown distance");
}

void warn_degenerate(Distance kind)
{
  warn(kind == Distance::cosine ? "cosine distance involving a zero vector was set to 1"
                                : "correlation distance involving a constant vector was set to 1");
}

// Distance to every center of one point; ties resolve to the lowest index.
std::size_t nearest(std::span<const double> x, const Centers& centers, Distance kind, bool& degenerate, double& best)
{
  std::size_t arg = 0;
  best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = raw_distance(x, centers[c], kind, degenerate);
    if (d < best) {
      best = d;
      arg = c;
    }
  }
  return arg;
}

double cost_term(double d, Distance kind)
{
  return kind == Distance::euclidean ? d * d : d;
}

Centers seed_impl(const FeatureField& f, int k, Distance kind, Rng& rng, bool strict)
{
  const std::size_t n = f.pixels();
  if (k < 1)
    throw std::invalid_argument(fmt::format("seed_centers: k must be >= 1, got {}", k));
  if (n == 0)
    throw std::invalid_argument("seed_centers: empty feature field");
  Centers centers;
  const auto first = f.at(rng.index(n));
  centers.emplace_back(first.begin(), first.end());
  std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
  bool degenerate = false;
  while (static_cast<int>(centers.size()) < k) {
    const auto& last = centers.back();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      dmin[p] = std::min(dmin[p], raw_distance(f.at(p), last, kind, degenerate));
      total += dmin[p];
    }
    if (!(total > 0.0)) {
      if (strict)
        throw std::invalid_argument(
            fmt::format("seed_centers: fewer than {} distinct feature vectors", k));
      while (static_cast<int>(centers.size()) < k)
        centers.push_back(centers.front());
      break;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t p = 0; p < n; ++p) {
      acc += dmin[p];
      if (acc > target && dmin[p] > 0.0) {
        pick = p;
        break;
      }
    }
    if (pick == n) {
      // rounding left target at the very end; take the last positive weight
      for (std::size_t p = n; p-- > 0;)
        if (dmin[p] > 0.0) {
          pick = p;
          break;
        }
    }
    const auto c = f.at(pick);
    centers.emplace_back(c.begin(), c.end());
  }
  if (degenerate)
    warn_degenerate(kind);
  return centers;
}

void update_center(const FeatureField& f, const std::vector<std::size_t>& members, Distance kind,
                   std::vector<double>& center)
{
  const std::size_t d = f.dim;
  if (kind == Distance::cityblock) {
    std::vector<double> vals(members.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < members.size(); ++i)
        vals[i] = f.at(members[i])[j];
      const auto mid = vals.begin() + static_cast<long>((vals.size() - 1) / 2);
      std::nth_element(vals.begin(), mid, vals.end());
      center[j] = *mid;
    }
    return;
  }
  std::fill(center.begin(), center.end(), 0.0);
  std::size_t used = 0;
  std::vector<double> tmp(d);
  for (std::size_t p : members) {
    const auto x = f.at(p);
    if (kind == Distance::euclidean) {
      for (std::size_t j = 0; j < d; ++j)
        center[j] += x[j];
      ++used;
      continue;
    }
    double mean = 0.0;
    if (kind == Distance::correlation) {
      for (double v : x)
        mean += v;
      mean /= static_cast<double>(d);
    }
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      tmp[j] = x[j] - mean;
      norm += tmp[j] * tmp[j];
    }
    if (norm == 0.0)
      continue;
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < d; ++j)
      center[j] += tmp[j] / norm;
    ++used;
  }
  if (used > 0)
    for (double& v : center)
      v /= static_cast<double>(used);
}

}  // namespace

const char* to_string(Distance d)
{
  switch (d) {
    case Distance::euclidean: return "euclidean";
    case Distance::cityblock: return "cityblock";
    case Distance::cosine: return "cosine";
    case Distance::correlation: return "correlation";
  }
  return "unknown";
}

const char* to_string(ClusterMethod m)
{
  return m == ClusterMethod::kmeans ? "kmeans" : "nystrom";
}

Distance parse_distance(std::string_view name)
{
  for (auto d : {Distance::euclidean, Distance::cityblock, Distance::cosine, Distance::correlation})
    if (name == to_string(d))
      return d;
  throw std::invalid_argument(fmt::format("unknown distance '{}'", name));
}

ClusterMethod parse_cluster_method(std::string_view name)
{
  if (name == "kmeans")
    return ClusterMethod::kmeans;
  if (name == "nystrom")
    return ClusterMethod::nystrom;
  throw std::invalid_argument(fmt::format("unknown clustering method '{}'", name));
}

std::size_t ClusterConfig::samples_for(std::size_t pixels) const
{
  if (nystrom_samples > 0)
    return nystrom_samples;
  return std::min<std::size_t>(1000, pixels / 64);
}

void ClusterConfig::validate(std::size_t pixels) const
{
  if (k < 2)
    throw std::invalid_argument(fmt::format("clustering: k must be >= 2, got {}", k));
  if (max_iters < 1)
    throw std::invalid_argument(fmt::format("clustering: max_iters must be >= 1, got {}", max_iters));
  if (static_cast<std::size_t>(k) > pixels)
    throw std::invalid_argument(fmt::format("clustering: k = {} exceeds the {} points", k, pixels));
  if (method == ClusterMethod::nystrom) {
    const std::size_t m = samples_for(pixels);
    if (m < 10 * static_cast<std::size_t>(k))
      throw std::invalid_argument(fmt::format("nystrom: {} samples is below 10 k = {}", m, 10 * k));
    if (m > pixels)
      throw std::invalid_argument(fmt::format("nystrom: {} samples exceeds the {} points", m, pixels));
  }
}

double distance(std::span<const double> a, std::span<const double> b, Distance kind)
{
  if (a.size() != b.size())
    throw std::invalid_argument(fmt::format("distance: dimensions {} and {} differ", a.size(), b.size()));
  bool degenerate = false;
  const double d = raw_distance(a, b, kind, degenerate);
  if (degenerate)
    warn_degenerate(kind);
  return d;
}

Centers seed_centers(const FeatureField& f, int k, Distance kind, Rng& rng)
{
  return seed_impl(f, k, kind, rng, true);
}

KMeansResult kmeans_detailed(const FeatureField& f, const ClusterConfig& cfg)
{
  const std::size_t n = f.pixels();
  cfg.validate(n);
  if (f.dim == 0)
    throw std::invalid_argument("kmeans: zero-dimensional features");
  Rng rng(cfg.seed);
  KMeansResult r;
  r.centers = seed_impl(f, cfg.k, cfg.distance, rng, false);
  const std::size_t k = r.centers.size();

  bool degenerate = false;
  std::vector<int> labels(n), fresh(n);
  std::vector<double> dist(n);
  auto assign = [&](std::vector<int>& out) {
    double cost = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      double best;
      out[p] = static_cast<int>(nearest(f.at(p), r.centers, cfg.distance, degenerate, best));
      dist[p] = best;
      cost += cost_term(best, cfg.distance);
    }
    return cost;
  };
  assign(labels);

  std::vector<std::vector<std::size_t>> members(k);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    r.iterations = it;
    for (auto& m : members)
      m.clear();
    for (std::size_t p = 0; p < n; ++p)
      members[static_cast<std::size_t>(labels[p])].push_back(p);
    for (std::size_t c = 0; c < k; ++c)
      if (!members[c].empty())
        update_center(f, members[c], cfg.distance, r.centers[c]);
    for (std::size_t c = 0; c < k; ++c) {
      if (!members[c].empty())
        continue;
      // farthest point from its own center among clusters that can spare one
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (members[static_cast<std::size_t>(labels[p])].size() < 2)
          continue;
        const double d = raw_distance(f.at(p), r.centers[static_cast<std::size_t>(labels[p])], cfg.distance, degenerate);
        if (d > far_d) {
          far_d = d;
          far = p;
        }
      }
      if (far == n)
        continue;
      auto& from = members[static_cast<std::size_t>(labels[far])];
      from.erase(std::find(from.begin(), from.end(), far));
      members[c].push_back(far);
      const auto x = f.at(far);
      r.centers[c].assign(x.begin(), x.end());
      ++r.reseeds;
    }
    const double cost = assign(fresh);
    r.cost_history.push_back(cost);
    if (fresh == labels)
      break;
    labels.swap(fresh);
  }
  if (degenerate)
    warn_degenerate(cfg.distance);
  r.labels = Partition(f.width, f.height, std::move(labels), cfg.k);
  return r;
}

Partition kmeans(const FeatureField& f, const ClusterConfig& cfg)
{
  return kmeans_detailed(f, cfg).labels;
}

FeatureField spectral_embedding(const FeatureField& f, const ClusterConfig& cfg)
{
  const std::size_t n = f.pixels();
  cfg.validate(n);
  const std::size_t m = cfg.samples_for(n);
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  Rng rng(cfg.seed);

  // uniform sample without replacement (partial Fisher-Yates)
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i)
    std::swap(perm[i], perm[i + rng.index(n - i)]);
  std::vector<std::size_t> sample(perm.begin(), perm.begin() + static_cast<long>(m));

  bool degenerate = false;
  Eigen::MatrixXd dist(m, m);
  std::vector<double> nonzero;
  for (std::size_t i = 0; i < m; ++i) {
    dist(i, i) = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = raw_distance(f.at(sample[i]), f.at(sample[j]), cfg.distance, degenerate);
      dist(i, j) = dist(j, i) = d;
      if (d > 0.0)
        nonzero.push_back(d);
    }
  }
  double sigma = cfg.nystrom_sigma;
  if (!(sigma > 0.0)) {
    sigma = 1.0;
    if (!nonzero.empty()) {
      const auto mid = nonzero.begin() + static_cast<long>(nonzero.size() / 2);
      std::nth_element(nonzero.begin(), mid, nonzero.end());
      sigma = *mid;
    }
  }
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  Eigen::MatrixXd affinity = (-(dist.array().square()) * inv2s2).exp().matrix();

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd degree;
  for (int attempt = 0;; ++attempt) {
    Eigen::MatrixXd a = affinity;
    if (attempt > 0)
      a.diagonal().array() += 1e-8 * attempt;
    degree = a.rowwise().sum();
    const Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
    const Eigen::MatrixXd norm = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(norm);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("nystrom: eigen-decomposition failed");
    values = es.eigenvalues().tail(static_cast<Eigen::Index>(k)).reverse();
    vectors = es.eigenvectors().rightCols(static_cast<Eigen::Index>(k)).rowwise().reverse();
    const double top = std::max(std::abs(values(0)), 1e-300);
    if ((values.array().abs() > 1e-12 * top).all())
      break;
    if (attempt == 3)
      throw std::runtime_error("nystrom: sample affinity is numerically singular after 3 jitter retries");
  }

  FeatureField emb;
  emb.width = f.width;
  emb.height = f.height;
  emb.dim = k;
  emb.data.assign(n * k, 0.0);
  const Eigen::VectorXd inv_sqrt_deg = degree.array().rsqrt();
  std::vector<double> w(m);
  for (std::size_t p = 0; p < n; ++p) {
    double dp = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = raw_distance(f.at(p), f.at(sample[j]), cfg.distance, degenerate);
      w[j] = std::exp(-d * d * inv2s2);
      dp += w[j];
    }
    auto row = emb.at(p);
    if (!(dp > 0.0))
      continue;
    const double inv_dp = 1.0 / std::sqrt(dp);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        s += w[j] * inv_sqrt_deg(static_cast<Eigen::Index>(j)) * vectors(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      row[c] = s * inv_dp / values(static_cast<Eigen::Index>(c));
    }
    double nrm = 0.0;
    for (double v : row)
      nrm += v * v;
    if (nrm > 0.0) {
      nrm = std::sqrt(nrm);
      for (double& v : row)
        v /= nrm;
    }
  }
  if (degenerate)
    warn_degenerate(cfg.distance);
  return emb;
}

Partition nystrom(const FeatureField& f, const ClusterConfig& cfg)
{
  const FeatureField emb = spectral_embedding(f, cfg);
  ClusterConfig km = cfg;
  km.method = ClusterMethod::kmeans;
  km.distance = Distance::euclidean;
  return kmeans(emb, km);
}

Partition cluster(const FeatureField& f, const ClusterConfig& cfg)
{
  return cfg.method == ClusterMethod::kmeans ? kmeans(f, cfg) : nystrom(f, cfg);
}

}  // namespace texseg
