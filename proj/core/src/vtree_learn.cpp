#include "slopp/vtree_learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slopp/error.hpp"
#include "slopp/random.hpp"

namespace slopp {

VtreeMethod parse_vtree_method(std::string_view name) {
  if (name == "balanced") return VtreeMethod::kBalanced;
  if (name == "rightlinear" || name == "right-linear") return VtreeMethod::kRightLinear;
  if (name == "random") return VtreeMethod::kRandom;
  if (name == "chowliu" || name == "chow-liu") return VtreeMethod::kChowLiu;
  throw DataError("unknown vtree method '" + std::string(name) + "'");
}

std::string_view to_string(VtreeMethod method) {
  switch (method) {
    case VtreeMethod::kBalanced: return "balanced";
    case VtreeMethod::kRightLinear: return "rightlinear";
    case VtreeMethod::kRandom: return "random";
    case VtreeMethod::kChowLiu: return "chowliu";
  }
  return "unknown";
}

namespace {

void require_vars(std::size_t n) {
  if (n == 0) throw DataError("cannot build a vtree over zero variables");
}

VtreeId balanced_rec(VtreeBuilder& b, std::span<const Var> vars) {
  if (vars.size() == 1) return b.leaf(vars[0]);
  const std::size_t half = (vars.size() + 1) / 2;
  VtreeId l = balanced_rec(b, vars.first(half));
  VtreeId r = balanced_rec(b, vars.subspan(half));
  return b.internal(l, r);
}

VtreeId random_rec(VtreeBuilder& b, std::span<const Var> vars, Rng& rng) {
  if (vars.size() == 1) return b.leaf(vars[0]);
  const std::size_t cut = 1 + rng.below(vars.size() - 1);
  VtreeId l = random_rec(b, vars.first(cut), rng);
  VtreeId r = random_rec(b, vars.subspan(cut), rng);
  return b.internal(l, r);
}

std::vector<Var> iota_vars(std::size_t n) {
  std::vector<Var> vars(n);
  std::iota(vars.begin(), vars.end(), Var{1});
  return vars;
}

}  // namespace

Vtree balanced_vtree(std::size_t n) {
  require_vars(n);
  VtreeBuilder b;
  auto vars = iota_vars(n);
  balanced_rec(b, vars);
  return std::move(b).build();
}

Vtree right_linear_vtree(std::size_t n) {
  require_vars(n);
  VtreeBuilder b;
  VtreeId tail = b.leaf(static_cast<Var>(n));
  for (std::size_t v = n - 1; v >= 1; --v) {
    VtreeId head = b.leaf(static_cast<Var>(v));
    tail = b.internal(head, tail);
  }
  return std::move(b).build();
}

Vtree random_vtree(std::size_t n, std::uint64_t seed) {
  require_vars(n);
  Rng rng(seed);
  auto vars = iota_vars(n);
  for (std::size_t i = n; i > 1; --i) std::swap(vars[i - 1], vars[rng.below(i)]);
  VtreeBuilder b;
  random_rec(b, vars, rng);
  return std::move(b).build();
}

std::vector<std::vector<double>> mutual_information(const Dataset& data) {
  const std::size_t n = data.num_vars();
  std::vector<std::vector<double>> mi(n, std::vector<double>(n, 0.0));
  const double denom = static_cast<double>(data.total()) + 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double joint[2][2] = {{1.0, 1.0}, {1.0, 1.0}};
      for (const auto& r : data.records()) {
        joint[r.values[i]][r.values[j]] += static_cast<double>(r.count);
      }
      double pi[2] = {(joint[0][0] + joint[0][1]) / denom, (joint[1][0] + joint[1][1]) / denom};
      double pj[2] = {(joint[0][0] + joint[1][0]) / denom, (joint[0][1] + joint[1][1]) / denom};
      double sum = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          double p = joint[a][b] / denom;
          sum += p * std::log(p / (pi[a] * pj[b]));
        }
      }
      mi[i][j] = mi[j][i] = sum;
    }
  }
  return mi;
}

std::vector<TreeEdge> chow_liu_tree(const Dataset& data) {
  const std::size_t n = data.num_vars();
  auto mi = mutual_information(data);
  std::vector<TreeEdge> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      candidates.push_back({static_cast<Var>(i + 1), static_cast<Var>(j + 1), mi[i][j]});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const TreeEdge& x, const TreeEdge& y) { return x.weight > y.weight; });

  std::vector<std::size_t> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<TreeEdge> tree;
  for (const auto& e : candidates) {
    auto ra = find(e.a);
    auto rb = find(e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    tree.push_back(e);
    if (tree.size() + 1 == n) break;
  }
  return tree;
}

namespace {

class TreeCutter {
 public:
  TreeCutter(std::size_t n, const std::vector<TreeEdge>& edges) : adj_(n + 1) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      adj_.at(edges[i].a).push_back(i);
      adj_.at(edges[i].b).push_back(i);
    }
    edges_ = edges;
    removed_.assign(edges.size(), 0);
  }

  VtreeId build(VtreeBuilder& b, std::vector<Var> component) {
    if (component.size() == 1) return b.leaf(component[0]);
    std::sort(component.begin(), component.end());
    const std::size_t total = component.size();
    const std::size_t min_side = std::max<std::size_t>(1, total / 4);

    std::size_t best = edges_.size();
    std::size_t best_small = 0;
    bool best_ok = false;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (removed_[e] || !std::binary_search(component.begin(), component.end(), edges_[e].a)) {
        continue;
      }
      removed_[e] = 1;
      std::size_t side = reach(edges_[e].a).size();
      removed_[e] = 0;
      std::size_t small = std::min(side, total - side);
      bool ok = small >= min_side;
      bool better = false;
      if (best == edges_.size()) {
        better = true;
      } else if (ok != best_ok) {
        better = ok;
      } else if (ok) {
        better = edges_[e].weight < edges_[best].weight;
      } else {
        better = small > best_small ||
                 (small == best_small && edges_[e].weight < edges_[best].weight);
      }
      if (better) {
        best = e;
        best_small = small;
        best_ok = ok;
      }
    }
    if (best == edges_.size()) throw DataError("variable tree is not connected");

    removed_[best] = 1;
    std::vector<Var> left = reach(component.front());
    std::vector<Var> right;
    std::sort(left.begin(), left.end());
    std::set_difference(component.begin(), component.end(), left.begin(), left.end(),
                        std::back_inserter(right));
    VtreeId l = build(b, std::move(left));
    VtreeId r = build(b, std::move(right));
    return b.internal(l, r);
  }

 private:
  std::vector<Var> reach(Var start) const {
    std::vector<Var> seen{start};
    std::vector<Var> stack{start};
    while (!stack.empty()) {
      Var v = stack.back();
      stack.pop_back();
      for (auto e : adj_[v]) {
        if (removed_[e]) continue;
        Var w = edges_[e].a == v ? edges_[e].b : edges_[e].a;
        if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
        seen.push_back(w);
        stack.push_back(w);
      }
    }
    return seen;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<TreeEdge> edges_;
  std::vector<std::uint8_t> removed_;
};

}  // namespace

Vtree vtree_from_tree(std::size_t n, const std::vector<TreeEdge>& edges) {
  require_vars(n);
  if (edges.size() + 1 != n) throw DataError("spanning tree needs n - 1 edges");
  TreeCutter cutter(n, edges);
  VtreeBuilder b;
  cutter.build(b, iota_vars(n));
  return std::move(b).build();
}

Vtree learn_vtree(const Dataset& data, VtreeMethod method, std::uint64_t seed) {
  const std::size_t n = data.num_vars();
  require_vars(n);
  switch (method) {
    case VtreeMethod::kBalanced: return balanced_vtree(n);
    case VtreeMethod::kRightLinear: return right_linear_vtree(n);
    case VtreeMethod::kRandom: return random_vtree(n, seed);
    case VtreeMethod::kChowLiu:
      if (data.empty()) throw DataError("no records");
      return vtree_from_tree(n, chow_liu_tree(data));
  }
  throw DataError("unknown vtree method");
}

}  // namespace slopp
