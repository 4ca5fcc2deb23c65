#include "slopp/kmeans.hpp"

#include <limits>

#include "slopp/error.hpp"
#include "slopp/random.hpp"

namespace slopp {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

// Index i such that the prefix sum of mass first exceeds target.
std::size_t sample(std::span<const double> mass, double total, Rng& rng) {
  double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    acc += mass[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

}  // namespace

KMeansResult weighted_kmeans(const std::vector<std::vector<double>>& points,
                             std::span<const double> weights, std::size_t k, std::uint64_t seed,
                             std::size_t max_iters) {
  const std::size_t n = points.size();
  if (weights.size() != n) throw DataError("k-means: one weight per point required");
  KMeansResult result;
  if (n == 0) return result;
  if (k == 0) throw DataError("k-means: k must be positive");

  Rng rng(seed);
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;

  std::vector<std::vector<double>> centers;
  centers.push_back(points[sample(weights, total_weight, rng)]);
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = sq_dist(points[i], centers[0]);
  while (centers.size() < k) {
    std::vector<double> mass(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += mass[i] = weights[i] * nearest[i];
    if (total <= 0.0) break;
    centers.push_back(points[sample(mass, total, rng)]);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], sq_dist(points[i], centers.back()));
    }
  }

  std::vector<std::size_t> labels(n, std::numeric_limits<std::size_t>::max());
  const std::size_t dim = points[0].size();
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = sq_dist(points[i], centers[0]);
      for (std::size_t c = 1; c < centers.size(); ++c) {
        double d = sq_dist(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed = changed || labels[i] != best;
      labels[i] = best;
    }
    result.iterations = iter + 1;
    if (!changed) break;

    std::vector<std::vector<double>> sums(centers.size(), std::vector<double>(dim, 0.0));
    std::vector<double> mass(centers.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      mass[labels[i]] += weights[i];
      for (std::size_t d = 0; d < dim; ++d) sums[labels[i]][d] += weights[i] * points[i][d];
    }
    std::vector<std::vector<double>> next;
    std::vector<std::size_t> renumber(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (mass[c] <= 0.0) continue;
      for (double& x : sums[c]) x /= mass[c];
      renumber[c] = next.size();
      next.push_back(std::move(sums[c]));
    }
    if (next.size() != centers.size()) {
      for (auto& l : labels) l = renumber[l];
    }
    centers = std::move(next);
  }

  // Number clusters by first appearance.
  std::vector<std::size_t> order(centers.size(), std::numeric_limits<std::size_t>::max());
  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& slot = order[labels[i]];
    if (slot == std::numeric_limits<std::size_t>::max()) slot = result.num_clusters++;
    result.labels[i] = slot;
  }
  return result;
}

}  // namespace slopp
