#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "slopp/circuit.hpp"
#include "slopp/dataset.hpp"

namespace slopp {

/// DNF whose clauses are complete conjunctions: each clause assigns a polarity
/// to every variable, so its models are exactly its clauses.
class Formula {
 public:
  explicit Formula(std::vector<Var> vars) : vars_(std::move(vars)) {}

  const std::vector<Var>& vars() const { return vars_; }
  const std::set<Assignment>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  /// Throws DataError if the clause does not assign every variable.
  void add_clause(Assignment clause);

  bool satisfied_by(std::span<const std::uint8_t> assignment) const;

 private:
  std::vector<Var> vars_;
  std::set<Assignment> clauses_;
};

/// Closed-world DNF of a database: one clause per distinct record, with
/// literal X_i when the record holds 1 and ¬X_i otherwise.
Formula dnf_of_database(const Dataset& data);

/// True iff the record satisfies the logical base of the root. The record is
/// indexed by variable - 1.
bool consistent(const Circuit& circuit, std::span<const std::uint8_t> record);

/// True iff the DNF logically implies the circuit's base. Because every clause
/// is complete this reduces to one consistency test per clause.
bool implies(const Formula& dnf, const Circuit& circuit);

/// Satisfiability of the conjunction of two nodes normalized for the same vtree
/// node. Product construction aligned on the vtree, memoized per call.
bool conjoin_satisfiable(const Circuit& circuit, NodeId a, NodeId b);
bool conjoin_satisfiable(std::span<const PsddNode> nodes, NodeId a, NodeId b);

/// Satisfiability of a single node's base.
bool satisfiable(std::span<const PsddNode> nodes, NodeId node);

}  // namespace slopp
