#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slopp {

/// Variables are identified by 1-based integers.
using Var = std::uint32_t;

enum class VtreeId : std::uint32_t {};

constexpr std::size_t index(VtreeId id) { return static_cast<std::size_t>(id); }
constexpr VtreeId vtree_id(std::size_t i) { return static_cast<VtreeId>(i); }

struct VtreeNode {
  Var var = 0;  // nonzero iff leaf
  VtreeId left{};
  VtreeId right{};

  bool is_leaf() const { return var != 0; }

  static VtreeNode leaf(Var v) { return {v, {}, {}}; }
  static VtreeNode internal(VtreeId l, VtreeId r) { return {0, l, r}; }
};

/// Full binary tree whose leaves are in one-to-one correspondence with the
/// variables 1..n. Nodes are stored children-before-parents and the last node
/// is the root.
class Vtree {
 public:
  /// Throws StructuralError unless the nodes form a valid vtree.
  explicit Vtree(std::vector<VtreeNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::size_t num_vars() const { return leaf_of_.size(); }
  VtreeId root() const { return vtree_id(nodes_.size() - 1); }

  const VtreeNode& node(VtreeId id) const { return nodes_.at(index(id)); }
  std::span<const VtreeNode> nodes() const { return nodes_; }

  bool is_leaf(VtreeId id) const { return node(id).is_leaf(); }
  Var var(VtreeId id) const { return node(id).var; }
  VtreeId left(VtreeId id) const { return node(id).left; }
  VtreeId right(VtreeId id) const { return node(id).right; }
  bool contains(VtreeId id) const { return index(id) < nodes_.size(); }

  /// Sorted variables below `id`.
  const std::vector<Var>& vars(VtreeId id) const { return vars_.at(index(id)); }
  VtreeId leaf_of(Var v) const;

  /// Lowest common ancestor of two nodes.
  VtreeId lca(VtreeId a, VtreeId b) const;

  friend bool operator==(const Vtree& a, const Vtree& b);

 private:
  std::vector<VtreeNode> nodes_;
  std::vector<std::vector<Var>> vars_;
  std::vector<VtreeId> parent_;
  std::vector<VtreeId> leaf_of_;  // indexed by var - 1
};

bool operator==(const VtreeNode& a, const VtreeNode& b);

/// Appends nodes in post-order; convenient for building vtrees recursively.
class VtreeBuilder {
 public:
  VtreeId leaf(Var v);
  VtreeId internal(VtreeId left, VtreeId right);
  Vtree build() &&;

 private:
  std::vector<VtreeNode> nodes_;
};

}  // namespace slopp
