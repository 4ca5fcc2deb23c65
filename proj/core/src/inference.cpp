#include "slopp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "slopp/error.hpp"
#include "slopp/vtree_learn.hpp"

namespace slopp {

Evaluator::Evaluator(const Circuit& circuit)
    : circuit_(circuit), values_(circuit.nodes().size(), kLogZero) {}

double Evaluator::log_prob(std::span<const std::uint8_t> record) {
  if (record.size() != circuit_.num_vars()) {
    throw DataError("record has " + std::to_string(record.size()) + " values, circuit has " +
                    std::to_string(circuit_.num_vars()) + " variables");
  }
  auto nodes = circuit_.nodes();
  const std::size_t root = index(circuit_.root());
  for (std::size_t i = 0; i <= root; ++i) {
    const PsddNode& n = nodes[i];
    if (const auto* lit = std::get_if<LiteralUnit>(&n.unit)) {
      values_[i] = (record[lit->var - 1] != 0) == lit->positive ? 0.0 : kLogZero;
    } else if (const auto* top = std::get_if<TrueUnit>(&n.unit)) {
      values_[i] = record[top->var - 1] ? top->log_theta : std::log1p(-std::exp(top->log_theta));
    } else {
      // Determinism: at most one prime holds, so the first live prime decides.
      double v = kLogZero;
      for (const auto& e : n.elements()) {
        double p = values_[index(e.prime)];
        if (p == kLogZero) continue;
        double s = values_[index(e.sub)];
        if (s != kLogZero) v = e.log_weight + p + s;
        break;
      }
      values_[i] = v;
    }
  }
  return values_[root];
}

double log_prob(const Circuit& circuit, std::span<const std::uint8_t> record) {
  return Evaluator(circuit).log_prob(record);
}

EvalReport dataset_ll(const Circuit& circuit, const Dataset& data, bool per_record) {
  const auto& cols = data.columns();
  bool same = cols.size() == circuit.num_vars();
  for (std::size_t i = 0; same && i < cols.size(); ++i) same = cols[i] == i + 1;
  if (!same) {
    throw DataError("dataset has " + std::to_string(cols.size()) + " variables, circuit has " +
                    std::to_string(circuit.num_vars()));
  }
  EvalReport report;
  Evaluator eval(circuit);
  if (per_record) report.per_record.reserve(data.size());
  for (const auto& r : data.records()) {
    double lp = eval.log_prob(r.values);
    if (per_record) report.per_record.push_back(lp);
    if (lp == kLogZero) {
      report.gamma += r.count;
    } else {
      report.consistent_count += r.count;
      report.ll += static_cast<double>(r.count) * lp;
    }
  }
  return report;
}

namespace {

// Entries are full-length assignments; variables outside the node's scope
// are left at 0 and overwritten when a parent combines prime and sub.
using Partial = std::vector<SupportEntry>;

class SupportWalker {
 public:
  explicit SupportWalker(const Circuit& c) : circuit_(c), memo_(c.nodes().size()) {}

  const Partial& support(NodeId id) {
    auto& slot = memo_[index(id)];
    if (slot.computed) return slot.entries;
    const PsddNode& n = circuit_.node(id);
    const std::size_t nv = circuit_.num_vars();
    Partial out;
    if (const auto* lit = std::get_if<LiteralUnit>(&n.unit)) {
      Assignment a(nv, 0);
      a[lit->var - 1] = lit->positive ? 1 : 0;
      out.push_back({std::move(a), 1.0});
    } else if (const auto* top = std::get_if<TrueUnit>(&n.unit)) {
      Assignment a(nv, 0);
      double theta = top->theta();
      out.push_back({a, 1.0 - theta});
      a[top->var - 1] = 1;
      out.push_back({std::move(a), theta});
    } else {
      const auto& sub_vars = circuit_.vtree().vars(circuit_.vtree().right(n.vtree));
      for (const auto& e : n.elements()) {
        const double w = e.weight();
        if (w == 0.0) continue;
        const Partial& primes = support(e.prime);
        const Partial& subs = support(e.sub);
        for (const auto& p : primes) {
          for (const auto& s : subs) {
            Assignment a = p.assignment;
            for (Var v : sub_vars) a[v - 1] = s.assignment[v - 1];
            out.push_back({std::move(a), w * p.probability * s.probability});
          }
        }
      }
    }
    slot.entries = std::move(out);
    slot.computed = true;
    return slot.entries;
  }

 private:
  struct Slot {
    bool computed = false;
    Partial entries;
  };
  const Circuit& circuit_;
  std::vector<Slot> memo_;
};

}  // namespace

std::vector<SupportEntry> enumerate_support(const Circuit& circuit, std::size_t limit) {
  if (circuit.num_vars() > limit) {
    throw DataError("enumeration limit: circuit has " + std::to_string(circuit.num_vars()) +
                    " variables, limit is " + std::to_string(limit));
  }
  SupportWalker walker(circuit);
  // Distinct elements cannot yield the same world in a deterministic circuit;
  // the map only matters for malformed input.
  std::map<Assignment, double> merged;
  for (const auto& e : walker.support(circuit.root())) {
    if (e.probability > 0.0) merged[e.assignment] += e.probability;
  }
  std::vector<SupportEntry> out;
  out.reserve(merged.size());
  for (auto& [a, p] : merged) out.push_back({a, p});
  return out;
}

Circuit fully_factorized(const Dataset& data) {
  if (data.empty()) throw DataError("no records");
  const std::size_t n = data.num_vars();
  Vtree vtree = right_linear_vtree(n);
  const double m = static_cast<double>(data.total());
  CircuitBuilder builder(vtree);
  auto unit = [&](Var v) {
    double ones = static_cast<double>(data.count_true(v - 1));
    return builder.true_unit(v, (ones + 1.0) / (m + 2.0));
  };
  NodeId tail = unit(static_cast<Var>(n));
  for (std::size_t v = n - 1; v >= 1; --v) {
    NodeId head = unit(static_cast<Var>(v));
    VtreeId at = vtree.lca(vtree.leaf_of(static_cast<Var>(v)), builder.node(tail).vtree);
    tail = builder.sum(at, {Element{head, tail, 0.0}});
  }
  return std::move(builder).build(tail);
}

}  // namespace slopp
