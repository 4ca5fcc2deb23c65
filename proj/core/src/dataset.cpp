#include "slopp/dataset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "slopp/error.hpp"

namespace slopp {

Dataset::Dataset(std::size_t num_vars) : columns_(num_vars) {
  std::iota(columns_.begin(), columns_.end(), Var{1});
}

Dataset::Dataset(std::vector<Var> columns) : columns_(std::move(columns)) {}

Dataset Dataset::from_rows(std::size_t num_vars, const std::vector<Assignment>& rows) {
  Dataset d(num_vars);
  for (const auto& r : rows) d.add(r);
  return d.aggregated();
}

void Dataset::add(std::span<const std::uint8_t> values, std::uint64_t count) {
  if (values.size() != columns_.size()) {
    throw DataError("record has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(columns_.size()));
  }
  if (count == 0) throw DataError("record count must be positive");
  for (auto v : values) {
    if (v > 1) throw DataError("record value " + std::to_string(v) + " is not binary");
  }
  records_.push_back({Assignment(values.begin(), values.end()), count});
  total_ += count;
}

Dataset Dataset::aggregated() const {
  Dataset out(columns_);
  std::map<Assignment, std::size_t> seen;
  for (const auto& r : records_) {
    auto [it, inserted] = seen.try_emplace(r.values, out.records_.size());
    if (inserted) {
      out.records_.push_back(r);
    } else {
      out.records_[it->second].count += r.count;
    }
    out.total_ += r.count;
  }
  return out;
}

Dataset Dataset::project(std::span<const Var> vars) const {
  std::vector<std::size_t> cols;
  cols.reserve(vars.size());
  for (Var v : vars) {
    auto it = std::find(columns_.begin(), columns_.end(), v);
    if (it == columns_.end()) {
      throw DataError("variable " + std::to_string(v) + " not in dataset");
    }
    cols.push_back(static_cast<std::size_t>(it - columns_.begin()));
  }
  Dataset out(std::vector<Var>(vars.begin(), vars.end()));
  out.records_.reserve(records_.size());
  for (const auto& r : records_) {
    Assignment values(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) values[i] = r.values[cols[i]];
    out.records_.push_back({std::move(values), r.count});
  }
  out.total_ = total_;
  return out;
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  Dataset out(columns_);
  out.records_.reserve(rows.size());
  for (auto i : rows) {
    out.records_.push_back(records_.at(i));
    out.total_ += records_[i].count;
  }
  return out;
}

std::uint64_t Dataset::count_true(std::size_t col) const {
  std::uint64_t n = 0;
  for (const auto& r : records_) n += r.values.at(col) ? r.count : 0;
  return n;
}

}  // namespace slopp
