#include "slopp/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "slopp/error.hpp"
#include "slopp/kmeans.hpp"
#include "slopp/logic_base.hpp"
#include "slopp/random.hpp"

namespace slopp {

void LearnConfig::check() const {
  if (k == 0) throw DataError("k must be at least 1");
  if (min_cluster == 0) throw DataError("minimum cluster size must be at least 1");
  if (!(smoothing >= 0.0)) throw DataError("smoothing must be nonnegative");
}

namespace {

void canonicalize(Partition& p) {
  for (auto& c : p) std::sort(c.begin(), c.end());
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition single_cluster(std::size_t n) {
  Partition p(1);
  p[0].resize(n);
  for (std::size_t i = 0; i < n; ++i) p[0][i] = i;
  return p;
}

}  // namespace

Partition cluster(const Dataset& left_data, const LearnConfig& config, std::uint64_t seed) {
  const std::size_t n = left_data.size();
  if (n == 0) return {};
  if (config.k == 1 || left_data.total() < config.min_cluster) return single_cluster(n);

  std::map<Assignment, std::size_t> group_of;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  std::vector<std::size_t> record_group(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Record& r = left_data.record(i);
    auto [it, inserted] = group_of.try_emplace(r.values, points.size());
    if (inserted) {
      points.emplace_back(r.values.begin(), r.values.end());
      weights.push_back(0.0);
    }
    weights[it->second] += static_cast<double>(r.count);
    record_group[i] = it->second;
  }
  if (points.size() == 1) return single_cluster(n);

  KMeansResult km = weighted_kmeans(points, weights, config.k, seed, config.max_kmeans_iters);
  Partition p(km.num_clusters);
  for (std::size_t i = 0; i < n; ++i) p[km.labels[record_group[i]]].push_back(i);
  std::erase_if(p, [](const auto& c) { return c.empty(); });
  canonicalize(p);
  return p;
}

std::vector<ElementDraft> enforce_exclusivity(std::vector<ElementDraft> elements,
                                              const CircuitBuilder& context,
                                              const Relearn& relearn) {
  for (;;) {
    bool merged = false;
    for (std::size_t i = 0; i < elements.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < elements.size() && !merged; ++j) {
        if (!conjoin_satisfiable(context.nodes(), elements[i].prime, elements[j].prime)) continue;
        std::vector<std::size_t> rows;
        rows.reserve(elements[i].rows.size() + elements[j].rows.size());
        std::merge(elements[i].rows.begin(), elements[i].rows.end(), elements[j].rows.begin(),
                   elements[j].rows.end(), std::back_inserter(rows));
        elements.erase(elements.begin() + static_cast<std::ptrdiff_t>(j));
        elements[i] = relearn(std::move(rows));
        merged = true;
      }
    }
    if (!merged) return elements;
  }
}

namespace {

// Tags for derived seeds; merges use a disjoint range from cluster indices.
constexpr std::uint64_t kPrimeTag = 0;
constexpr std::uint64_t kSubTag = 1;
constexpr std::uint64_t kMergeTagBase = 1ULL << 32;

class Learner {
 public:
  Learner(const Dataset& data, const Vtree& vtree, const LearnConfig& config,
          const Clusterer& clusterer)
      : data_(data), vtree_(vtree), config_(config), clusterer_(clusterer), builder_(vtree) {}

  NodeId learn(const std::vector<std::size_t>& rows, VtreeId v, std::uint64_t seed) {
    if (vtree_.is_leaf(v)) return leaf(rows, v);

    const std::uint64_t total = count(rows);
    Dataset left = data_.select(rows).project(vtree_.vars(vtree_.left(v)));
    Partition parts = clusterer_(left, v, seed);
    check_partition(parts, rows.size());
    canonicalize(parts);

    std::vector<ElementDraft> drafts;
    drafts.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::vector<std::size_t> cluster_rows;
      cluster_rows.reserve(parts[i].size());
      for (auto local : parts[i]) cluster_rows.push_back(rows[local]);
      std::sort(cluster_rows.begin(), cluster_rows.end());
      drafts.push_back(element(std::move(cluster_rows), v, derive_seed(seed, i)));
    }

    std::uint64_t merges = 0;
    drafts = enforce_exclusivity(std::move(drafts), builder_, [&](std::vector<std::size_t> r) {
      return element(std::move(r), v, derive_seed(seed, kMergeTagBase + merges++));
    });

    const double alpha = config_.smoothing;
    const double denom = static_cast<double>(total) + alpha * static_cast<double>(drafts.size());
    std::vector<Element> elements;
    elements.reserve(drafts.size());
    for (const auto& d : drafts) {
      double w = (static_cast<double>(d.count) + alpha) / denom;
      elements.push_back({d.prime, d.sub, std::log(w)});
    }
    return builder_.sum(v, std::move(elements));
  }

  CircuitBuilder& builder() { return builder_; }

 private:
  ElementDraft element(std::vector<std::size_t> rows, VtreeId v, std::uint64_t seed) {
    ElementDraft d;
    d.prime = learn(rows, vtree_.left(v), derive_seed(seed, kPrimeTag));
    d.sub = learn(rows, vtree_.right(v), derive_seed(seed, kSubTag));
    d.count = count(rows);
    d.rows = std::move(rows);
    return d;
  }

  NodeId leaf(const std::vector<std::size_t>& rows, VtreeId v) {
    const Var x = vtree_.var(v);
    std::uint64_t ones = 0;
    for (auto r : rows) ones += data_.record(r).values[x - 1] ? data_.record(r).count : 0;
    const std::uint64_t total = count(rows);
    if (ones == total) return builder_.literal(x, true);
    if (ones == 0) return builder_.literal(x, false);
    const double alpha = config_.smoothing;
    return builder_.true_unit(
        x, (static_cast<double>(ones) + alpha) / (static_cast<double>(total) + 2.0 * alpha));
  }

  std::uint64_t count(const std::vector<std::size_t>& rows) const {
    std::uint64_t c = 0;
    for (auto r : rows) c += data_.record(r).count;
    return c;
  }

  static void check_partition(const Partition& parts, std::size_t n) {
    std::vector<std::uint8_t> seen(n, 0);
    std::size_t covered = 0;
    for (const auto& c : parts) {
      if (c.empty()) throw DataError("clusterer returned an empty cluster");
      for (auto i : c) {
        if (i >= n || seen[i]) throw DataError("clusterer returned overlapping or invalid indices");
        seen[i] = 1;
        ++covered;
      }
    }
    if (covered != n) throw DataError("clusterer did not cover every record");
  }

  const Dataset& data_;
  const Vtree& vtree_;
  const LearnConfig& config_;
  const Clusterer& clusterer_;
  CircuitBuilder builder_;
};

}  // namespace

Circuit slopp(const Dataset& data, const Vtree& vtree, const LearnConfig& config) {
  Clusterer by_kmeans = [&config](const Dataset& left, VtreeId, std::uint64_t seed) {
    return cluster(left, config, seed);
  };
  return slopp(data, vtree, config, by_kmeans);
}

Circuit slopp(const Dataset& data, const Vtree& vtree, const LearnConfig& config,
              const Clusterer& clusterer) {
  config.check();
  if (data.empty()) throw DataError("no records");
  const auto& cols = data.columns();
  bool same = cols.size() == vtree.num_vars();
  for (std::size_t i = 0; same && i < cols.size(); ++i) same = cols[i] == i + 1;
  if (!same) {
    throw DataError("dataset has " + std::to_string(cols.size()) + " variables, vtree has " +
                    std::to_string(vtree.num_vars()));
  }

  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  Learner learner(data, vtree, config, clusterer);
  NodeId root = learner.learn(rows, vtree.root(), config.seed);
  Circuit circuit = std::move(learner.builder()).build(root);
  return config.dedup ? dedup(circuit) : circuit;
}

}  // namespace slopp
