#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "slopp/dataset.hpp"
#include "slopp/vtree.hpp"

namespace slopp {

enum class VtreeMethod { kBalanced, kRightLinear, kRandom, kChowLiu };

/// Accepts "balanced", "rightlinear" (or "right-linear"), "random", "chowliu"
/// (or "chow-liu"); throws DataError otherwise.
VtreeMethod parse_vtree_method(std::string_view name);
std::string_view to_string(VtreeMethod method);

/// Balanced split of the ordered variables 1..n; the left half takes the
/// extra variable when n is odd.
Vtree balanced_vtree(std::size_t n);

/// X1 | (X2 | (... | Xn)).
Vtree right_linear_vtree(std::size_t n);

/// Random variable order and random split points, fixed by `seed`.
Vtree random_vtree(std::size_t n, std::uint64_t seed);

/// Pairwise mutual information (nats) from Laplace-1 smoothed joint counts.
/// Entry [i][j] is I(X_{i+1}; X_{j+1}); the diagonal is zero.
std::vector<std::vector<double>> mutual_information(const Dataset& data);

struct TreeEdge {
  Var a = 0;  // a < b
  Var b = 0;
  double weight = 0.0;
};

/// Maximum spanning tree on mutual information. Ties prefer the lexicographically
/// smallest (a, b).
std::vector<TreeEdge> chow_liu_tree(const Dataset& data);

/// Converts a spanning tree over 1..n into a vtree by recursive edge cuts. Each
/// cut removes the weakest edge whose removal leaves at least a quarter of the
/// component on the smaller side (falling back to the most balanced edge); the
/// side holding the lowest variable becomes the left child.
Vtree vtree_from_tree(std::size_t n, const std::vector<TreeEdge>& edges);

/// Dispatches on `method`. Throws DataError when there are no variables, or
/// when chow-liu is requested on an empty dataset.
Vtree learn_vtree(const Dataset& data, VtreeMethod method, std::uint64_t seed = 0);

}  // namespace slopp
