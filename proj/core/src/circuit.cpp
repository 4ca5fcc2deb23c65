#include "slopp/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "slopp/error.hpp"
#include "slopp/logic_base.hpp"

namespace slopp {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::string node_name(std::size_t i) { return "node " + std::to_string(i); }

void check_children(std::span<const PsddNode> nodes, std::size_t i) {
  const PsddNode& n = nodes[i];
  if (!n.is_sum()) return;
  for (const auto& e : n.elements()) {
    if (index(e.prime) >= i || index(e.sub) >= i) {
      throw StructuralError(node_name(i) + " references a node not stored before it");
    }
  }
}

}  // namespace

Circuit::Circuit(Vtree vtree, std::vector<PsddNode> nodes, NodeId root)
    : vtree_(std::move(vtree)), nodes_(std::move(nodes)), root_(root) {
  if (index(root_) >= nodes_.size()) throw StructuralError("circuit root is not a valid node");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!vtree_.contains(nodes_[i].vtree)) {
      throw StructuralError(node_name(i) + " refers to a missing vtree node");
    }
    check_children(nodes_, i);
  }
}

const PsddNode& Circuit::node(NodeId id) const {
  if (!contains(id)) throw StructuralError("invalid node reference " + std::to_string(index(id)));
  return nodes_[index(id)];
}

NodeId CircuitBuilder::literal(Var v, bool positive) {
  return add({vtree_.leaf_of(v), LiteralUnit{v, positive}});
}

NodeId CircuitBuilder::true_unit(Var v, double theta) {
  return add({vtree_.leaf_of(v), TrueUnit{v, std::log(theta)}});
}

NodeId CircuitBuilder::sum(VtreeId v, std::vector<Element> elements) {
  return add({v, SumUnit{std::move(elements)}});
}

NodeId CircuitBuilder::add(PsddNode node) {
  if (!vtree_.contains(node.vtree)) throw StructuralError("node refers to a missing vtree node");
  nodes_.push_back(std::move(node));
  try {
    check_children(nodes_, nodes_.size() - 1);
  } catch (...) {
    nodes_.pop_back();
    throw;
  }
  return node_id(nodes_.size() - 1);
}

Circuit CircuitBuilder::build(NodeId root) && {
  if (index(root) >= nodes_.size()) throw StructuralError("circuit root is not a valid node");
  std::vector<std::uint8_t> live(nodes_.size(), 0);
  live[index(root)] = 1;
  for (std::size_t i = index(root) + 1; i-- > 0;) {
    if (!live[i] || !nodes_[i].is_sum()) continue;
    for (const auto& e : nodes_[i].elements()) {
      live[index(e.prime)] = 1;
      live[index(e.sub)] = 1;
    }
  }
  std::vector<std::size_t> remap(nodes_.size(), 0);
  std::vector<PsddNode> kept;
  for (std::size_t i = 0; i <= index(root); ++i) {
    if (!live[i]) continue;
    remap[i] = kept.size();
    PsddNode n = std::move(nodes_[i]);
    if (auto* s = std::get_if<SumUnit>(&n.unit)) {
      for (auto& e : s->elements) {
        e.prime = node_id(remap[index(e.prime)]);
        e.sub = node_id(remap[index(e.sub)]);
      }
    }
    kept.push_back(std::move(n));
  }
  return Circuit(std::move(vtree_), std::move(kept), node_id(kept.size() - 1));
}

std::vector<Var> scope(const Circuit& circuit, NodeId node) {
  circuit.node(node);
  auto nodes = circuit.nodes();
  std::vector<std::uint8_t> seen(index(node) + 1, 0);
  std::set<Var> vars;
  seen[index(node)] = 1;
  for (std::size_t i = index(node) + 1; i-- > 0;) {
    if (!seen[i]) continue;
    const PsddNode& n = nodes[i];
    if (n.is_literal()) {
      vars.insert(n.literal().var);
    } else if (n.is_true()) {
      vars.insert(n.true_unit().var);
    } else {
      for (const auto& e : n.elements()) {
        seen[index(e.prime)] = 1;
        seen[index(e.sub)] = 1;
      }
    }
  }
  return {vars.begin(), vars.end()};
}

ValidationReport validate(const Circuit& circuit) {
  ValidationReport report;
  const Vtree& vtree = circuit.vtree();
  auto nodes = circuit.nodes();
  auto flag = [&](std::size_t i, std::string msg) {
    report.violations.push_back({node_id(i), node_name(i) + ": " + std::move(msg)});
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PsddNode& n = nodes[i];
    if (n.is_literal() || n.is_true()) {
      Var v = n.is_literal() ? n.literal().var : n.true_unit().var;
      if (!vtree.is_leaf(n.vtree) || vtree.var(n.vtree) != v) {
        flag(i, "input unit on X" + std::to_string(v) + " is not placed on that variable's leaf");
      }
      if (n.is_true()) {
        double lt = n.true_unit().log_theta;
        if (!(lt < 0.0) || !std::isfinite(lt)) {
          flag(i, "theta " + std::to_string(std::exp(lt)) + " outside (0,1)");
        }
      }
      continue;
    }
    if (vtree.is_leaf(n.vtree)) {
      flag(i, "sum unit normalized for a vtree leaf");
      continue;
    }
    const auto& elements = n.elements();
    if (elements.empty()) {
      flag(i, "sum unit without elements encodes false");
      continue;
    }
    double total = 0.0;
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const Element& el = elements[e];
      double w = el.weight();
      if (std::isnan(w) || w < 0.0) flag(i, "element " + std::to_string(e) + " has a negative weight");
      total += w;
      if (nodes[index(el.prime)].vtree != vtree.left(n.vtree)) {
        flag(i, "prime of element " + std::to_string(e) + " does not cover the left vtree child");
      }
      if (nodes[index(el.sub)].vtree != vtree.right(n.vtree)) {
        flag(i, "sub of element " + std::to_string(e) + " does not cover the right vtree child");
      }
    }
    if (!(std::abs(total - 1.0) <= kWeightSumTolerance)) {
      flag(i, "weights sum to " + std::to_string(total));
    }
  }

  const std::size_t root = index(circuit.root());
  if (!nodes[root].is_sum() && vtree.num_vars() > 1) flag(root, "root is not a sum unit");
  if (nodes[root].vtree != vtree.root()) flag(root, "root is not normalized for the vtree root");

  std::vector<std::uint8_t> reachable(nodes.size(), 0);
  reachable[root] = 1;
  for (std::size_t i = root + 1; i-- > 0;) {
    if (!reachable[i] || !nodes[i].is_sum()) continue;
    for (const auto& e : nodes[i].elements()) {
      reachable[index(e.prime)] = 1;
      reachable[index(e.sub)] = 1;
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!reachable[i]) flag(i, "not reachable from the root");
  }

  // Logical checks assume the vtree alignment verified above.
  if (!report.ok()) return report;

  std::vector<std::uint8_t> sat(nodes.size(), 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_sum()) continue;
    const auto& elements = nodes[i].elements();
    bool any = false;
    for (std::size_t e = 0; e < elements.size(); ++e) {
      bool live = sat[index(elements[e].prime)] && sat[index(elements[e].sub)];
      if (!live) flag(i, "element " + std::to_string(e) + " is a dead branch");
      any = any || live;
    }
    sat[i] = any;
    for (std::size_t a = 0; a < elements.size(); ++a) {
      for (std::size_t b = a + 1; b < elements.size(); ++b) {
        if (conjoin_satisfiable(nodes, elements[a].prime, elements[b].prime)) {
          flag(i, "primes of elements " + std::to_string(a) + " and " + std::to_string(b) +
                      " are not exclusive");
        }
      }
    }
  }
  return report;
}

CircuitSize size(const Circuit& circuit) {
  auto nodes = circuit.nodes();
  const std::size_t root = index(circuit.root());
  std::vector<std::uint8_t> reachable(nodes.size(), 0);
  reachable[root] = 1;
  CircuitSize s;
  for (std::size_t i = root + 1; i-- > 0;) {
    if (!reachable[i]) continue;
    const PsddNode& n = nodes[i];
    if (n.is_input()) {
      ++s.input_units;
      if (n.is_true()) ++s.parameters;
      continue;
    }
    ++s.sum_units;
    const auto& elements = n.elements();
    s.product_units += elements.size();
    s.edges += 3 * elements.size();
    s.parameters += elements.empty() ? 0 : elements.size() - 1;
    for (const auto& e : elements) {
      reachable[index(e.prime)] = 1;
      reachable[index(e.sub)] = 1;
    }
  }
  s.nodes = s.input_units + s.product_units + s.sum_units;
  return s;
}

Circuit dedup(const Circuit& circuit, double tolerance) {
  auto nodes = circuit.nodes();
  // Candidates share a structural key; parameters are compared with tolerance.
  using Key = std::tuple<int, std::uint32_t, Var, bool, std::vector<std::size_t>>;
  std::map<Key, std::vector<std::size_t>> buckets;
  std::vector<PsddNode> kept;
  std::vector<std::size_t> remap(nodes.size());

  auto params_close = [&](const PsddNode& a, const PsddNode& b) {
    if (a.is_true()) return std::abs(a.true_unit().log_theta - b.true_unit().log_theta) <= tolerance;
    if (!a.is_sum()) return true;
    const auto& ea = a.elements();
    const auto& eb = b.elements();
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (!(std::abs(ea[i].weight() - eb[i].weight()) <= tolerance)) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i <= index(circuit.root()); ++i) {
    PsddNode n = nodes[i];
    Key key{static_cast<int>(n.unit.index()), static_cast<std::uint32_t>(n.vtree), 0, false, {}};
    if (n.is_literal()) {
      std::get<2>(key) = n.literal().var;
      std::get<3>(key) = n.literal().positive;
    } else if (n.is_true()) {
      std::get<2>(key) = n.true_unit().var;
    } else {
      for (auto& e : std::get<SumUnit>(n.unit).elements) {
        e.prime = node_id(remap[index(e.prime)]);
        e.sub = node_id(remap[index(e.sub)]);
        std::get<4>(key).push_back(index(e.prime));
        std::get<4>(key).push_back(index(e.sub));
      }
    }
    auto& bucket = buckets[key];
    auto match = std::find_if(bucket.begin(), bucket.end(),
                              [&](std::size_t k) { return params_close(kept[k], n); });
    if (match != bucket.end() && i != index(circuit.root())) {
      remap[i] = *match;
      continue;
    }
    remap[i] = kept.size();
    bucket.push_back(kept.size());
    kept.push_back(std::move(n));
  }
  // The root was appended last, so the builder's reachability pass drops the
  // leftovers of merged subtrees.
  CircuitBuilder builder(circuit.vtree());
  for (auto& n : kept) builder.add(std::move(n));
  return std::move(builder).build(node_id(kept.size() - 1));
}

}  // namespace slopp
