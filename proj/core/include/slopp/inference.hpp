#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "slopp/circuit.hpp"
#include "slopp/dataset.hpp"

namespace slopp {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Natural-log probability of a complete assignment (indexed by variable - 1),
/// or kLogZero when the record violates the circuit's logical base.
double log_prob(const Circuit& circuit, std::span<const std::uint8_t> record);

/// Reusable bottom-up evaluator; keeps one scratch buffer across records.
class Evaluator {
 public:
  explicit Evaluator(const Circuit& circuit);

  double log_prob(std::span<const std::uint8_t> record);

 private:
  const Circuit& circuit_;
  std::vector<double> values_;
};

/// Test log-likelihood over consistent records; inconsistent ones are counted
/// in gamma and left out of ll. Counts weight every term.
struct EvalReport {
  double ll = 0.0;
  std::uint64_t gamma = 0;
  std::uint64_t consistent_count = 0;
  /// Per stored record log-probability (kLogZero when inconsistent); filled
  /// only on request.
  std::vector<double> per_record;

  std::uint64_t total() const { return gamma + consistent_count; }
};

/// Throws DataError if the dataset columns are not the circuit's variables.
EvalReport dataset_ll(const Circuit& circuit, const Dataset& data, bool per_record = false);

struct SupportEntry {
  Assignment assignment;
  double probability = 0.0;
};

/// Every assignment with positive probability, sorted lexicographically.
/// Walks the circuit: primes restrict the assignments that subs extend, so the
/// cost is proportional to the support, not to 2^n. Throws DataError
/// ("enumeration limit") if the circuit has more than `limit` variables.
std::vector<SupportEntry> enumerate_support(const Circuit& circuit, std::size_t limit = 20);

/// Independent Bernoulli per variable on a right-linear vtree, with
/// Laplace-1 smoothed frequencies so every unit is a ⊤ unit and the base is
/// the tautology.
Circuit fully_factorized(const Dataset& data);

}  // namespace slopp
