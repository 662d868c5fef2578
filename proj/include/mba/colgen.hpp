#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "mba/common.hpp"
#include "mba/instance.hpp"

namespace mba {

// One feasible m-tuple: an element index per layer, weighted by the
// instance's own weights.
struct TupleColumn {
  std::vector<int> path;
  std::int64_t weight = 0;
};

// Deduplicated column set. add() validates the path against the instance
// and returns false when the column is already pooled.
struct ColumnPool {
  std::vector<TupleColumn> columns;

  bool add(const MbaInstance& inst, std::vector<int> path);

 private:
  std::set<std::vector<int>> index_;
};

// Prices from the restricted master: node prices u[i][j], slot prices r[k],
// and the index of the smallest slot price (lowest index on ties).
struct DualValues {
  WeightMatrix u;
  std::vector<double> r;
  int k_star = 0;
};

struct MasterLpResult {
  double value = 0.0;
  DualValues duals;
};

// Solves the pricing LP over the pool: maximize sum(u) subject to, for every
// pooled column p and every slot, sum of u over p's nodes <= w_p * r. The
// slot prices collapse to the uniform vector 1/n (any feasible r has some
// slot price <= 1/n, and raising every slot price to 1/n preserves
// feasibility), so only the u variables are solved for; the optimal value
// equals the master LP relaxation over the pool by duality. Throws when the
// pool leaves any node uncovered (the LP would be unbounded).
MasterLpResult solve_master_lp(const MbaInstance& inst,
                               const ColumnPool& pool);

struct PricingResult {
  std::vector<TupleColumn> columns;       // a full partition, n columns
  std::vector<double> reduced_costs;      // per column
  double best_reduced_cost = 0.0;
};

// Heuristic pricing: greedy with lookahead plus post-optimization on the
// instance re-weighted to r[k_star]*w[i][j] - u[i][j], decomposed into n
// columns. step_time_limit bounds each lookahead window.
PricingResult price(const MbaInstance& inst, const DualValues& duals, int L,
                    double step_time_limit = kInf);

// Picks exactly n pool columns that partition the nodes, minimizing the
// largest selected column weight: descending threshold over the distinct
// pooled weights, a depth-first exact-cover search per threshold. Returns
// the best cover found, or nothing when none was found in time.
std::optional<MbaSolution> solve_master_ip(const MbaInstance& inst,
                                           const ColumnPool& pool,
                                           double time_limit_seconds);

struct ColgenStats {
  std::vector<double> lp_values;  // one per master solve, nonincreasing
  double pre_seconds = 0.0;       // seeding + pricing loop
  double master_seconds = 0.0;    // final integer master
  double master_ip_value = 0.0;   // best integral pool solution found
  int columns_generated = 0;      // final pool size
  int rounds = 0;                 // pricing rounds run
};

struct ColgenResult {
  SolveReport report;
  MbaSolution solution;
  ColgenStats stats;
};

// Column generation around the greedy: seed the pool with a lookahead +
// post-optimization solution, alternate master LP and pricing until no new
// improving column shows up for three consecutive rounds or time runs out
// (an in-flight pricing round is allowed to finish), then solve the integer
// master over the pool and keep the better of seed and cover. The reported
// lower bound is the final master LP value (a bound relative to the pool,
// clamped to the objective). A caller that already has a lookahead +
// post-optimization solution can pass it as seed to skip reseeding.
ColgenResult colgen_solve(const MbaInstance& inst, double time_limit_seconds,
                          int L, const MbaSolution* seed = nullptr);

}  // namespace mba
