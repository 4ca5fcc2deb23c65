#include "slopp/logic_base.hpp"

#include <map>
#include <string>
#include <utility>

#include "slopp/error.hpp"

namespace slopp {

void Formula::add_clause(Assignment clause) {
  if (clause.size() != vars_.size()) {
    throw DataError("clause assigns " + std::to_string(clause.size()) + " of " +
                    std::to_string(vars_.size()) + " variables");
  }
  clauses_.insert(std::move(clause));
}

bool Formula::satisfied_by(std::span<const std::uint8_t> assignment) const {
  return clauses_.contains(Assignment(assignment.begin(), assignment.end()));
}

Formula dnf_of_database(const Dataset& data) {
  if (data.empty()) throw DataError("no records");
  Formula f(data.columns());
  for (const auto& r : data.records()) f.add_clause(r.values);
  return f;
}

namespace {

void check_arity(const Circuit& circuit, std::size_t n) {
  if (n != circuit.num_vars()) {
    throw DataError("record has " + std::to_string(n) + " values, circuit has " +
                    std::to_string(circuit.num_vars()) + " variables");
  }
}

}  // namespace

bool consistent(const Circuit& circuit, std::span<const std::uint8_t> record) {
  check_arity(circuit, record.size());
  auto nodes = circuit.nodes();
  std::vector<std::uint8_t> sat(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PsddNode& n = nodes[i];
    if (const auto* lit = std::get_if<LiteralUnit>(&n.unit)) {
      sat[i] = (record[lit->var - 1] != 0) == lit->positive;
    } else if (n.is_true()) {
      sat[i] = 1;
    } else {
      for (const auto& e : n.elements()) {
        if (sat[index(e.prime)] && sat[index(e.sub)]) {
          sat[i] = 1;
          break;
        }
      }
    }
  }
  return sat[index(circuit.root())] != 0;
}

bool implies(const Formula& dnf, const Circuit& circuit) {
  const auto& vars = dnf.vars();
  bool same = vars.size() == circuit.num_vars();
  for (std::size_t i = 0; same && i < vars.size(); ++i) same = vars[i] == i + 1;
  if (!same) throw DataError("formula and circuit are over different variables");
  for (const auto& clause : dnf.clauses()) {
    if (!consistent(circuit, clause)) return false;
  }
  return true;
}

namespace {

class ConjoinSearch {
 public:
  explicit ConjoinSearch(std::span<const PsddNode> nodes) : nodes_(nodes) {}

  bool run(NodeId a, NodeId b) {
    if (index(a) > index(b)) std::swap(a, b);
    const PsddNode& na = nodes_[index(a)];
    const PsddNode& nb = nodes_[index(b)];
    if (na.vtree != nb.vtree) {
      throw StructuralError("conjoin of nodes " + std::to_string(index(a)) + " and " +
                            std::to_string(index(b)) + " normalized for different vtree nodes");
    }
    if (na.is_input() || nb.is_input()) {
      if (!na.is_input() || !nb.is_input()) {
        throw StructuralError("conjoin of an input unit with a sum unit");
      }
      if (na.is_literal() && nb.is_literal()) {
        return na.literal().positive == nb.literal().positive;
      }
      return true;
    }
    auto key = std::make_pair(index(a), index(b));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = false;
    for (const auto& ea : na.elements()) {
      for (const auto& eb : nb.elements()) {
        if (run(ea.prime, eb.prime) && run(ea.sub, eb.sub)) {
          result = true;
          break;
        }
      }
      if (result) break;
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  std::span<const PsddNode> nodes_;
  std::map<std::pair<std::size_t, std::size_t>, bool> memo_;
};

}  // namespace

bool conjoin_satisfiable(std::span<const PsddNode> nodes, NodeId a, NodeId b) {
  if (index(a) >= nodes.size() || index(b) >= nodes.size()) {
    throw StructuralError("conjoin of an invalid node reference");
  }
  return ConjoinSearch(nodes).run(a, b);
}

bool conjoin_satisfiable(const Circuit& circuit, NodeId a, NodeId b) {
  return conjoin_satisfiable(circuit.nodes(), a, b);
}

bool satisfiable(std::span<const PsddNode> nodes, NodeId node) {
  if (index(node) >= nodes.size()) throw StructuralError("invalid node reference");
  std::vector<std::uint8_t> sat(index(node) + 1, 0);
  for (std::size_t i = 0; i <= index(node); ++i) {
    const PsddNode& n = nodes[i];
    if (n.is_input()) {
      sat[i] = 1;
      continue;
    }
    for (const auto& e : n.elements()) {
      if (sat[index(e.prime)] && sat[index(e.sub)]) {
        sat[i] = 1;
        break;
      }
    }
  }
  return sat[index(node)] != 0;
}

}  // namespace slopp
