#pragma once

#include <optional>
#include <vector>

#include "mba/common.hpp"
#include "mba/instance.hpp"

namespace mba {

// c[i][j] = least total weight of an arc-feasible path from (i,j) through the
// last layer, including w[i][j]; kInf when (i,j) reaches a dead end.
struct CompletionTable {
  std::vector<std::vector<double>> c;
};

CompletionTable min_completion(const MbaInstance& inst);
CompletionTable min_completion(const MbaInstance& inst, const WeightMatrix& wm);

struct ExactResult {
  SolveReport report;
  MbaSolution solution;  // empty when status == Infeasible
};

// Depth-first branch-and-bound. The root fixes layer 1 to the identity
// (tuples are unlabeled, so this loses no solutions); children of a node are
// the perfect matchings of the next cut, enumerated lazily in nondecreasing
// bottleneck order of the accumulated tuple weights. A node is pruned when
//   max_k (W[k] + cheapest continuation of tuple k's frontier element)
// reaches the incumbent. Without a warm start the first incumbent is the
// first leaf of the search, which by construction is the greedy solution.
// On timeout, lower_bound is min over still-open subtrees of their bound
// (clamped to the incumbent objective); status is Feasible if the incumbent
// improved on its initial value and TimeLimit otherwise.
ExactResult solve_exact(const MbaInstance& inst, double time_limit_seconds = kInf,
                        const MbaSolution* warm_start = nullptr);

// Exhaustive oracle, guarded to n <= 6 and m <= 5.
ExactResult brute_force(const MbaInstance& inst);

struct WindowResult {
  Status status = Status::Infeasible;
  double objective = kInf;      // max_k (offsets[k] + assigned weight)
  double lower_bound = -kInf;
  std::vector<std::vector<int>> assign;  // n rows, one element per window layer
  std::int64_t nodes = 0;
};

// solve_exact's machinery with layer 1 pinned to fixed_first_layer and tuple
// k's running weight starting at offsets[k]. Weights come from wm (may be
// negative); wm's first-layer entries are ignored, the offsets stand in for
// them. Used by the greedy lookahead (offsets = accumulated prefix weights)
// and by pricing (wm = modified weights).
WindowResult solve_window(const MbaInstance& inst, const WeightMatrix& wm,
                          const std::vector<double>& offsets,
                          const std::vector<int>& fixed_first_layer,
                          double time_limit_seconds);

}  // namespace mba
