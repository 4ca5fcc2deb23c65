// Shared fixtures and brute-force oracles for the test suites. The oracles
// evaluate circuits straight from the recursive definitions, in linear space,
// and never call into the library's evaluators.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "slopp/circuit.hpp"
#include "slopp/dataset.hpp"
#include "slopp/learner.hpp"
#include "slopp/vtree.hpp"
#include "slopp/vtree_learn.hpp"

namespace slopp::testing {

// Worked-example database, (count, x1..x4), listed in its three clusters:
// rows {0,1}, {2,3,4}, {5,6}.
inline Dataset example_data() {
  const std::vector<std::pair<std::uint64_t, Assignment>> rows = {
      {3, {0, 0, 1, 1}}, {7, {0, 0, 0, 0}}, {2, {1, 0, 0, 1}}, {3, {0, 1, 1, 1}},
      {9, {0, 1, 1, 0}}, {2, {1, 1, 0, 1}}, {4, {1, 1, 1, 0}},
  };
  Dataset d(4);
  for (const auto& [c, r] : rows) d.add(r, c);
  return d;
}

// (X1 X2) | (X3 X4), ids in post-order: 0 X1, 1 X2, 2, 3 X3, 4 X4, 5, 6 root.
inline Vtree example_vtree() {
  VtreeBuilder b;
  auto x1 = b.leaf(1);
  auto x2 = b.leaf(2);
  auto l = b.internal(x1, x2);
  auto x3 = b.leaf(3);
  auto x4 = b.leaf(4);
  auto r = b.internal(x3, x4);
  b.internal(l, r);
  return std::move(b).build();
}

// The worked-example PSDD, built by hand.
inline Circuit example_psdd() {
  Vtree v = example_vtree();
  CircuitBuilder b(v);
  const VtreeId left = vtree_id(2), right = vtree_id(5), root = vtree_id(6);
  auto lit = [&](Var x, bool pos) { return b.literal(x, pos); };
  auto el = [](NodeId p, NodeId s, double w) { return Element{p, s, std::log(w)}; };

  NodeId p1 = b.sum(left, {el(lit(1, false), lit(2, false), 1.0)});
  NodeId s1 = b.sum(right, {el(lit(3, true), lit(4, true), 3.0 / 10), el(lit(3, false), lit(4, false), 7.0 / 10)});
  NodeId p2 = b.sum(left, {el(lit(1, true), lit(2, false), 2.0 / 14), el(lit(1, false), lit(2, true), 12.0 / 14)});
  NodeId s2 = b.sum(right, {el(lit(3, false), lit(4, true), 2.0 / 14),
                            el(lit(3, true), b.true_unit(4, 1.0 / 4), 12.0 / 14)});
  NodeId p3 = b.sum(left, {el(lit(1, true), lit(2, true), 1.0)});
  NodeId s3 = b.sum(right, {el(lit(3, true), lit(4, false), 4.0 / 6), el(lit(3, false), lit(4, true), 2.0 / 6)});
  NodeId top = b.sum(root, {el(p1, s1, 10.0 / 30), el(p2, s2, 14.0 / 30), el(p3, s3, 6.0 / 30)});
  return std::move(b).build(top);
}

// Structural equality up to element order, with log-parameters within tol.
inline bool same_node(const Circuit& a, NodeId na, const Circuit& b, NodeId nb, double tol) {
  const PsddNode& x = a.node(na);
  const PsddNode& y = b.node(nb);
  if (x.vtree != y.vtree || x.unit.index() != y.unit.index()) return false;
  if (x.is_literal()) {
    return x.literal().var == y.literal().var && x.literal().positive == y.literal().positive;
  }
  if (x.is_true()) {
    return x.true_unit().var == y.true_unit().var &&
           std::abs(x.true_unit().log_theta - y.true_unit().log_theta) <= tol;
  }
  const auto& ex = x.elements();
  const auto& ey = y.elements();
  if (ex.size() != ey.size()) return false;
  std::vector<bool> used(ey.size(), false);
  for (const auto& e : ex) {
    bool found = false;
    for (std::size_t j = 0; j < ey.size() && !found; ++j) {
      if (used[j] || std::abs(e.log_weight - ey[j].log_weight) > tol) continue;
      if (same_node(a, e.prime, b, ey[j].prime, tol) && same_node(a, e.sub, b, ey[j].sub, tol)) {
        used[j] = found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Pins the root split to the worked example's groups; deeper calls use k-means.
inline Clusterer example_clusterer(const LearnConfig& config) {
  return [config](const Dataset& left, VtreeId node, std::uint64_t seed) -> Partition {
    if (node == vtree_id(6)) return {{0, 1}, {2, 3, 4}, {5, 6}};
    return cluster(left, config, seed);
  };
}

inline std::vector<Assignment> all_assignments(std::size_t n) {
  std::vector<Assignment> out;
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (bits >> (n - 1 - i)) & 1;
    out.push_back(std::move(a));
  }
  return out;
}

// Linear-space probability from the circuit definition, summing over every
// element (no use of determinism).
inline double oracle_prob(const Circuit& c, NodeId id, const Assignment& x) {
  const PsddNode& n = c.node(id);
  if (n.is_literal()) return (x[n.literal().var - 1] != 0) == n.literal().positive ? 1.0 : 0.0;
  if (n.is_true()) {
    double theta = std::exp(n.true_unit().log_theta);
    return x[n.true_unit().var - 1] ? theta : 1.0 - theta;
  }
  double p = 0.0;
  for (const auto& e : n.elements()) {
    p += std::exp(e.log_weight) * oracle_prob(c, e.prime, x) * oracle_prob(c, e.sub, x);
  }
  return p;
}

inline double oracle_prob(const Circuit& c, const Assignment& x) {
  return oracle_prob(c, c.root(), x);
}

// Truth value of a node's logical base.
inline bool oracle_sat(const Circuit& c, NodeId id, const Assignment& x) {
  const PsddNode& n = c.node(id);
  if (n.is_literal()) return (x[n.literal().var - 1] != 0) == n.literal().positive;
  if (n.is_true()) return true;
  for (const auto& e : n.elements()) {
    if (oracle_sat(c, e.prime, x) && oracle_sat(c, e.sub, x)) return true;
  }
  return false;
}

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  // Skewed columns with a few copied ones so clusters and pure columns occur.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> bias(n);
  for (auto& b : bias) b = u(rng) < 0.3 ? (u(rng) < 0.5 ? 0.02 : 0.98) : u(rng);
  Dataset d(n);
  for (std::size_t j = 0; j < m; ++j) {
    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = (i > 0 && u(rng) < 0.3) ? a[i - 1] : static_cast<std::uint8_t>(u(rng) < bias[i]);
    }
    d.add(a);
  }
  return d.aggregated();
}

}  // namespace slopp::testing
