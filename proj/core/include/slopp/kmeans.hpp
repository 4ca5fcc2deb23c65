#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slopp {

struct KMeansResult {
  /// Cluster of each point, in [0, num_clusters).
  std::vector<std::size_t> labels;
  std::size_t num_clusters = 0;
  std::size_t iterations = 0;
};

/// Weighted Lloyd k-means with k-means++ seeding and squared Euclidean
/// distance. Seeding stops early once every remaining point coincides with a
/// center, and clusters that become empty are dropped, so num_clusters may be
/// smaller than k. Distance ties go to the lowest center. Labels are numbered
/// by first appearance.
KMeansResult weighted_kmeans(const std::vector<std::vector<double>>& points,
                             std::span<const double> weights, std::size_t k, std::uint64_t seed,
                             std::size_t max_iters = 100);

}  // namespace slopp
