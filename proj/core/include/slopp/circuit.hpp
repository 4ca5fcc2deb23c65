#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "slopp/vtree.hpp"

namespace slopp {

enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(i); }

/// Input unit X (positive) or ¬X.
struct LiteralUnit {
  Var var = 0;
  bool positive = true;
};

/// Input unit ⊤ with P(X=1) = theta, theta in (0,1). Stored in log space.
struct TrueUnit {
  Var var = 0;
  double log_theta = 0.0;

  double theta() const { return std::exp(log_theta); }
};

/// Product unit (prime, sub) attached to a sum unit with a weight.
struct Element {
  NodeId prime{};
  NodeId sub{};
  double log_weight = 0.0;

  double weight() const { return std::exp(log_weight); }
};

/// Sum (decision) unit; its elements are the product units below it.
struct SumUnit {
  std::vector<Element> elements;
};

struct PsddNode {
  VtreeId vtree{};
  std::variant<LiteralUnit, TrueUnit, SumUnit> unit;

  bool is_literal() const { return std::holds_alternative<LiteralUnit>(unit); }
  bool is_true() const { return std::holds_alternative<TrueUnit>(unit); }
  bool is_input() const { return !is_sum(); }
  bool is_sum() const { return std::holds_alternative<SumUnit>(unit); }

  const LiteralUnit& literal() const { return std::get<LiteralUnit>(unit); }
  const TrueUnit& true_unit() const { return std::get<TrueUnit>(unit); }
  const SumUnit& sum() const { return std::get<SumUnit>(unit); }
  std::span<const Element> elements() const { return sum().elements; }
};

/// Immutable PSDD. Nodes live in an arena in which every child precedes its
/// parents, so a single forward pass evaluates the circuit bottom-up.
class Circuit {
 public:
  /// Throws StructuralError if the arena is not topologically ordered, a
  /// reference dangles, or a node refers to a vtree node that does not exist.
  Circuit(Vtree vtree, std::vector<PsddNode> nodes, NodeId root);

  const Vtree& vtree() const { return vtree_; }
  std::span<const PsddNode> nodes() const { return nodes_; }
  const PsddNode& node(NodeId id) const;
  NodeId root() const { return root_; }
  std::size_t num_vars() const { return vtree_.num_vars(); }
  bool contains(NodeId id) const { return index(id) < nodes_.size(); }

 private:
  Vtree vtree_;
  std::vector<PsddNode> nodes_;
  NodeId root_;
};

/// Mutable arena used while a circuit is being grown. Input units are placed on
/// the vtree leaf of their variable.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(Vtree vtree) : vtree_(std::move(vtree)) {}

  NodeId literal(Var v, bool positive);
  NodeId true_unit(Var v, double theta);
  NodeId sum(VtreeId v, std::vector<Element> elements);
  NodeId add(PsddNode node);

  const Vtree& vtree() const { return vtree_; }
  std::span<const PsddNode> nodes() const { return nodes_; }
  const PsddNode& node(NodeId id) const { return nodes_.at(index(id)); }

  /// Keeps only the nodes reachable from `root` (in arena order) and freezes.
  Circuit build(NodeId root) &&;

 private:
  Vtree vtree_;
  std::vector<PsddNode> nodes_;
};

/// Variables of the input units reachable from `node`, sorted.
std::vector<Var> scope(const Circuit& circuit, NodeId node);

struct Violation {
  NodeId node{};
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks every structural and parameter invariant of a PSDD, including prime
/// exclusivity and the absence of dead branches. Never throws on a malformed
/// circuit; problems become report entries.
///
/// A circuit over a single variable has no internal vtree node, so its root is
/// allowed to be an input unit.
ValidationReport validate(const Circuit& circuit);

/// Node counts: input units + product units (one per element) + sum units.
/// Edges: sum→element plus element→prime and element→sub. Parameters: k-1 free
/// weights per sum unit plus one per ⊤ unit. Only nodes reachable from the root
/// are counted; shared nodes count once.
struct CircuitSize {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t parameters = 0;
  std::size_t input_units = 0;
  std::size_t product_units = 0;
  std::size_t sum_units = 0;
};

CircuitSize size(const Circuit& circuit);

/// Merges structurally identical nodes (same kind, vtree node, children and
/// parameters within `tolerance`), turning the tree into a DAG.
Circuit dedup(const Circuit& circuit, double tolerance = 1e-12);

}  // namespace slopp
