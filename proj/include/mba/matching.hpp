#pragma once

#include <tuple>
#include <vector>

#include "mba/common.hpp"

namespace mba {

// Balanced bipartite problem on n left and n right nodes. Values may be
// negative (the pricing step relies on that).
struct BipartiteProblem {
  int n = 0;
  std::vector<std::vector<int>> adj;          // sorted right neighbors per left node
  std::vector<std::vector<double>> val;       // values parallel to adj

  static BipartiteProblem from_pairs(
      int n, const std::vector<std::tuple<int, int, double>>& pairs);
};

struct MatchingResult {
  std::vector<int> match_left;  // right partner per left node, -1 if unmatched
  int cardinality = 0;
};

// Maximum-cardinality matching (Hopcroft-Karp). Deterministic: neighbor lists
// are scanned in ascending order.
MatchingResult maximum_matching(const BipartiteProblem& p);

struct BottleneckResult {
  std::vector<int> assignment;  // perfect matching, right partner per left node
  double value = 0.0;           // max value used by the matching
};

// Perfect matching minimizing the largest pair value: binary search over the
// distinct values with a matching feasibility test per threshold. Among
// optimal matchings, returns the one found by augmenting left nodes in
// increasing order, always taking the lowest-index augmenting choice.
// Throws InfeasibleError when no perfect matching exists.
BottleneckResult bottleneck_assignment(const BipartiteProblem& p);

}  // namespace mba
