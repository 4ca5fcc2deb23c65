#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slopp/vtree.hpp"

namespace slopp {

/// Complete Boolean assignment; entry i holds the value of the i-th column.
using Assignment = std::vector<std::uint8_t>;

struct Record {
  Assignment values;
  std::uint64_t count = 1;
};

/// Binary record matrix with multiplicities. Each column is labelled with the
/// variable it holds; a freshly created dataset has columns 1..n.
///
/// Records are not required to be distinct: `add` appends and `aggregated`
/// merges duplicates. Projection and selection keep the row order so record
/// indices stay meaningful across them.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t num_vars);
  explicit Dataset(std::vector<Var> columns);

  /// Aggregates identical rows into counted records (first-occurrence order).
  static Dataset from_rows(std::size_t num_vars, const std::vector<Assignment>& rows);

  std::size_t num_vars() const { return columns_.size(); }
  const std::vector<Var>& columns() const { return columns_; }

  /// Number of stored (possibly repeated) records.
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Total multiplicity m = sum of counts.
  std::uint64_t total() const { return total_; }

  const Record& record(std::size_t i) const { return records_.at(i); }
  std::span<const Record> records() const { return records_; }

  /// Appends a record; throws DataError on arity mismatch, non-binary values or
  /// a zero count.
  void add(std::span<const std::uint8_t> values, std::uint64_t count = 1);

  /// Copy with identical rows merged.
  Dataset aggregated() const;

  /// Keeps only the given columns, identified by variable label.
  Dataset project(std::span<const Var> vars) const;

  /// Keeps only the given rows, in the given order.
  Dataset select(std::span<const std::size_t> rows) const;

  /// Total count of records whose column `col` is 1.
  std::uint64_t count_true(std::size_t col) const;

 private:
  std::vector<Var> columns_;
  std::vector<Record> records_;
  std::uint64_t total_ = 0;
};

}  // namespace slopp
