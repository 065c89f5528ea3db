#pragma once

#include "texseg/features.hpp"
#include "texseg/partition.hpp"
#include "texseg/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace texseg {

enum class Distance { euclidean, cityblock, cosine, correlation };
enum class ClusterMethod { kmeans, nystrom };

const char* to_string(Distance d);
const char* to_string(ClusterMethod m);
Distance parse_distance(std::string_view name);
ClusterMethod parse_cluster_method(std::string_view name);

struct ClusterConfig {
  ClusterMethod method = ClusterMethod::kmeans;
  int k = 2;
  Distance distance = Distance::cityblock;
  std::uint64_t seed = 0;
  int max_iters = 300;
  std::size_t nystrom_samples = 0;  // 0: min(1000, pixels / 64)
  double nystrom_sigma = 0.0;       // <= 0: median pairwise sample distance

  /// Resolved sample count for a field of `pixels` points.
  std::size_t samples_for(std::size_t pixels) const;
  void validate(std::size_t pixels) const;
};

/// ell2, ell1, 1 - cosine similarity, 1 - Pearson correlation. A zero vector
/// (cosine) or a constant vector (correlation) is at distance 1, with a
/// warning.
double distance(std::span<const double> a, std::span<const double> b, Distance kind);

using Centers = std::vector<std::vector<double>>;

/// Distance-proportional seeding: the first center is a uniformly drawn
/// pixel, each next one is drawn with probability proportional to its
/// distance to the nearest chosen center. Throws std::invalid_argument when
/// fewer than k distinct vectors exist.
Centers seed_centers(const FeatureField& f, int k, Distance kind, Rng& rng);

struct KMeansResult {
  Partition labels;
  Centers centers;
  std::vector<double> cost_history;  // after each Lloyd iteration
  int iterations = 0;
  int reseeds = 0;
};

/// Lloyd iterations from seed_centers. Center update: mean (euclidean),
/// mean of unit vectors (cosine), mean of standardized vectors
/// (correlation), coordinate-wise median (cityblock). An empty cluster is
/// moved to the point farthest from its center. With fewer distinct vectors
/// than k the missing seeds repeat the first center and are then handled by
/// the empty-cluster rule.
KMeansResult kmeans_detailed(const FeatureField& f, const ClusterConfig& cfg);
Partition kmeans(const FeatureField& f, const ClusterConfig& cfg);

/// Row-normalized Nystrom embedding (k leading eigenvectors of the
/// normalized sample affinity, extended to every pixel).
FeatureField spectral_embedding(const FeatureField& f, const ClusterConfig& cfg);
Partition nystrom(const FeatureField& f, const ClusterConfig& cfg);

/// Dispatches on cfg.method.
Partition cluster(const FeatureField& f, const ClusterConfig& cfg);

}  // namespace texseg
