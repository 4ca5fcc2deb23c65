#include "slopp/vtree.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "slopp/error.hpp"

namespace slopp {

namespace {

constexpr auto kNoParent = static_cast<VtreeId>(std::numeric_limits<std::uint32_t>::max());

}  // namespace

Vtree::Vtree(std::vector<VtreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw StructuralError("vtree has no nodes");

  const std::size_t count = nodes_.size();
  vars_.resize(count);
  parent_.assign(count, kNoParent);

  std::size_t leaves = 0;
  for (const auto& n : nodes_) leaves += n.is_leaf() ? 1 : 0;
  if (count != 2 * leaves - 1) {
    throw StructuralError("vtree is not a full binary tree: " + std::to_string(count) +
                          " nodes for " + std::to_string(leaves) + " leaves");
  }
  leaf_of_.assign(leaves, kNoParent);

  for (std::size_t i = 0; i < count; ++i) {
    const VtreeNode& n = nodes_[i];
    if (n.is_leaf()) {
      if (n.var > leaves) {
        throw StructuralError("vtree variable " + std::to_string(n.var) + " outside 1.." +
                              std::to_string(leaves));
      }
      if (leaf_of_[n.var - 1] != kNoParent) {
        throw StructuralError("vtree variable " + std::to_string(n.var) + " appears twice");
      }
      leaf_of_[n.var - 1] = vtree_id(i);
      vars_[i] = {n.var};
      continue;
    }
    for (VtreeId child : {n.left, n.right}) {
      if (index(child) >= i) {
        throw StructuralError("vtree node " + std::to_string(i) +
                              " references a child not declared before it");
      }
      if (parent_[index(child)] != kNoParent) {
        throw StructuralError("vtree node " + std::to_string(index(child)) +
                              " has more than one parent");
      }
      parent_[index(child)] = vtree_id(i);
    }
    if (n.left == n.right) throw StructuralError("vtree node with identical children");
    const auto& lv = vars_[index(n.left)];
    const auto& rv = vars_[index(n.right)];
    vars_[i].reserve(lv.size() + rv.size());
    std::merge(lv.begin(), lv.end(), rv.begin(), rv.end(), std::back_inserter(vars_[i]));
  }

  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (parent_[i] == kNoParent) {
      throw StructuralError("vtree node " + std::to_string(i) + " is not reachable from the root");
    }
  }
}

VtreeId Vtree::leaf_of(Var v) const {
  if (v == 0 || v > leaf_of_.size()) {
    throw StructuralError("variable " + std::to_string(v) + " not in vtree");
  }
  return leaf_of_[v - 1];
}

VtreeId Vtree::lca(VtreeId a, VtreeId b) const {
  // Parents always have larger indices, so walk the smaller index upwards.
  while (a != b) {
    if (index(a) < index(b)) {
      a = parent_.at(index(a));
    } else {
      b = parent_.at(index(b));
    }
  }
  return a;
}

bool operator==(const VtreeNode& a, const VtreeNode& b) {
  if (a.is_leaf() || b.is_leaf()) return a.var == b.var;
  return a.left == b.left && a.right == b.right;
}

bool operator==(const Vtree& a, const Vtree& b) { return a.nodes_ == b.nodes_; }

VtreeId VtreeBuilder::leaf(Var v) {
  nodes_.push_back(VtreeNode::leaf(v));
  return vtree_id(nodes_.size() - 1);
}

VtreeId VtreeBuilder::internal(VtreeId left, VtreeId right) {
  nodes_.push_back(VtreeNode::internal(left, right));
  return vtree_id(nodes_.size() - 1);
}

Vtree VtreeBuilder::build() && { return Vtree(std::move(nodes_)); }

}  // namespace slopp
