#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "slopp/circuit.hpp"
#include "slopp/dataset.hpp"
#include "slopp/vtree.hpp"

namespace slopp {

struct LearnConfig {
  /// Target number of clusters per sum unit.
  std::size_t k = 2;
  /// Minimum total count required to attempt clustering.
  std::uint64_t min_cluster = 20;
  std::uint64_t seed = 0;
  std::size_t max_kmeans_iters = 100;
  /// Merge structurally identical nodes after learning.
  bool dedup = false;
  /// Laplace pseudo-count for sum weights and ⊤ parameters; 0 keeps raw
  /// frequencies.
  double smoothing = 0.0;

  /// Throws DataError if k or min_cluster is zero or smoothing is negative.
  void check() const;
};

/// Disjoint, nonempty index sets covering every record of a dataset.
using Partition = std::vector<std::vector<std::size_t>>;

/// Splits the records of `left_data` into clusters. Records with the same
/// values always share a cluster: k-means runs on the distinct rows, weighted
/// by their counts. A single cluster is returned when the total count is below
/// config.min_cluster, when k = 1, or when all rows coincide. Clusters are
/// ordered by their smallest record index.
Partition cluster(const Dataset& left_data, const LearnConfig& config, std::uint64_t seed);

/// Clustering strategy used at every sum unit. Receives the left projection of
/// the current sub-database, the vtree node being learned and the derived seed.
using Clusterer =
    std::function<Partition(const Dataset& left_data, VtreeId node, std::uint64_t seed)>;

/// Element under construction: the records it was learned from and its count.
struct ElementDraft {
  NodeId prime{};
  NodeId sub{};
  std::vector<std::size_t> rows;
  std::uint64_t count = 0;
};

using Relearn = std::function<ElementDraft(std::vector<std::size_t> rows)>;

/// Repairs overlapping primes: while two primes are jointly satisfiable the
/// later element's records are moved into the earlier one, which is learned
/// again through `relearn`. Each round removes one element, so the loop stops.
std::vector<ElementDraft> enforce_exclusivity(std::vector<ElementDraft> elements,
                                              const CircuitBuilder& context,
                                              const Relearn& relearn);

/// Learns a PSDD by recursive vtree-guided clustering. Sum weights are cluster
/// counts over the sub-database count; single-variable leaves become X, ¬X or
/// ⊤ with the empirical frequency. Throws DataError on an empty dataset or when
/// the dataset columns are not the vtree's variables 1..n.
Circuit slopp(const Dataset& data, const Vtree& vtree, const LearnConfig& config);
Circuit slopp(const Dataset& data, const Vtree& vtree, const LearnConfig& config,
              const Clusterer& clusterer);

}  // namespace slopp
