#include "mba/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mba/greedy.hpp"
#include "mba/lp.hpp"

namespace mba {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string node_name(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

bool ColumnPool::add(const MbaInstance& inst, std::vector<int> path) {
  if ((int)path.size() != inst.m)
    throw Error("column: path length does not match layer count");
  for (int v : path)
    if (v < 0 || v >= inst.n) throw Error("column: element index out of range");
  for (int j = 0; j + 1 < inst.m; ++j) {
    const auto& s = inst.succ[j][path[j]];
    if (!std::binary_search(s.begin(), s.end(), path[j + 1]))
      throw Error("column: path skips a missing arc between layers " +
                  std::to_string(j + 1) + " and " + std::to_string(j + 2));
  }
  if (!index_.insert(path).second) return false;
  TupleColumn c;
  c.weight = 0;
  for (int j = 0; j < inst.m; ++j) c.weight += inst.weights[path[j]][j];
  c.path = std::move(path);
  columns.push_back(std::move(c));
  return true;
}

MasterLpResult solve_master_lp(const MbaInstance& inst,
                               const ColumnPool& pool) {
  const int n = inst.n;
  const int m = inst.m;
  std::vector<std::vector<char>> covered(n, std::vector<char>(m, 0));
  for (const auto& c : pool.columns)
    for (int j = 0; j < m; ++j) covered[c.path[j]][j] = 1;
  std::string missing;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (!covered[i][j]) missing += " " + node_name(i, j);
  if (!missing.empty())
    throw Error("master: pool leaves nodes uncovered:" + missing);

  LinearProgram lp;
  lp.sense = LinearProgram::Sense::Maximize;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_variable(1.0);
  for (const auto& c : pool.columns) {
    std::vector<double> row((std::size_t)n * m, 0.0);
    for (int j = 0; j < m; ++j) row[(std::size_t)c.path[j] * m + j] = 1.0;
    lp.add_row(row, '<', (double)c.weight / n);
  }
  LpResult r = lp_solve(lp);
  if (r.status != LpStatus::Optimal)
    throw Error("master: pricing LP did not solve to optimality");

  MasterLpResult out;
  out.value = r.value;
  out.duals.u.assign(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      out.duals.u[i][j] = std::max(r.x[(std::size_t)i * m + j], 0.0);
  out.duals.r.assign(n, 1.0 / n);
  out.duals.k_star = 0;
  return out;
}

PricingResult price(const MbaInstance& inst, const DualValues& duals, int L,
                    double step_time_limit) {
  const int n = inst.n;
  const int m = inst.m;
  if ((int)duals.u.size() != n || (int)duals.r.size() != n ||
      duals.k_star < 0 || duals.k_star >= n)
    throw Error("price: dual dimensions do not match the instance");
  const double rs = duals.r[duals.k_star];
  WeightMatrix mod(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i) {
    if ((int)duals.u[i].size() != m)
      throw Error("price: dual dimensions do not match the instance");
    for (int j = 0; j < m; ++j)
      mod[i][j] = rs * (double)inst.weights[i][j] - duals.u[i][j];
  }
  MbaSolution sol = greedy_lookahead(inst, mod, L, step_time_limit);
  sol = post_optimize(inst, mod, sol);

  PricingResult out;
  out.best_reduced_cost = kInf;
  for (int k = 0; k < n; ++k) {
    TupleColumn c;
    c.path = sol.assign[k];
    double rc = 0.0;
    c.weight = 0;
    for (int j = 0; j < m; ++j) {
      c.weight += inst.weights[c.path[j]][j];
      rc += mod[c.path[j]][j];
    }
    out.best_reduced_cost = std::min(out.best_reduced_cost, rc);
    out.reduced_costs.push_back(rc);
    out.columns.push_back(std::move(c));
  }
  return out;
}

namespace {

// Exact cover search over pooled columns restricted to a weight threshold.
// Columns and covered nodes are tracked as bitmasks; the branching node is
// the uncovered node with the fewest usable columns, candidates tried
// lightest first.
struct CoverSearch {
  int n, m, words;
  const std::vector<TupleColumn>* cols;
  std::vector<std::vector<std::uint64_t>> mask;  // per column
  std::vector<std::vector<int>> node_cols;       // column ids per node
  std::vector<std::uint64_t> covered;
  std::vector<int> chosen;
  Clock::time_point deadline;
  bool timed_out = false;
  int steps = 0;

  CoverSearch(const MbaInstance& inst, const std::vector<TupleColumn>& pool,
              Clock::time_point dl)
      : n(inst.n), m(inst.m), words((inst.n * inst.m + 63) / 64), cols(&pool),
        deadline(dl) {
    mask.assign(pool.size(), std::vector<std::uint64_t>(words, 0));
    node_cols.assign((std::size_t)n * m, {});
    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pool[a].weight < pool[b].weight;
    });
    for (int c : order) {
      for (int j = 0; j < m; ++j) {
        int node = pool[c].path[j] * m + j;
        mask[c][node >> 6] |= 1ull << (node & 63);
        node_cols[node].push_back(c);  // stays weight-sorted
      }
    }
    covered.assign(words, 0);
  }

  bool usable(int c, std::int64_t limit) const {
    if ((*cols)[c].weight > limit) return false;
    for (int w = 0; w < words; ++w)
      if (mask[c][w] & covered[w]) return false;
    return true;
  }

  bool dfs(int left, std::int64_t limit) {
    if (left == 0) return true;
    if (++steps >= 1024) {
      steps = 0;
      if (Clock::now() >= deadline) {
        timed_out = true;
        return false;
      }
    }
    int pick = -1, pick_count = 0;
    for (int node = 0; node < n * m; ++node) {
      if (covered[node >> 6] >> (node & 63) & 1) continue;
      int count = 0;
      for (int c : node_cols[node]) {
        if (!usable(c, limit)) continue;
        if (++count >= 3 && pick >= 0) break;  // already not the scarcest
      }
      if (count == 0) return false;
      if (pick < 0 || count < pick_count) {
        pick = node;
        pick_count = count;
        if (count == 1) break;
      }
    }
    for (int c : node_cols[pick]) {
      if (!usable(c, limit)) continue;
      for (int w = 0; w < words; ++w) covered[w] |= mask[c][w];
      chosen.push_back(c);
      if (dfs(left - m, limit)) return true;
      chosen.pop_back();
      for (int w = 0; w < words; ++w) covered[w] &= ~mask[c][w];
      if (timed_out) return false;
    }
    return false;
  }
};

}  // namespace

std::optional<MbaSolution> solve_master_ip(const MbaInstance& inst,
                                           const ColumnPool& pool,
                                           double time_limit_seconds) {
  const int n = inst.n;
  const int m = inst.m;
  if (pool.columns.empty()) return std::nullopt;
  Clock::time_point deadline =
      time_limit_seconds < 1e9
          ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(
                                   std::max(time_limit_seconds, 0.0)))
          : Clock::time_point::max();

  CoverSearch search(inst, pool.columns, deadline);
  for (int node = 0; node < n * m; ++node)
    if (search.node_cols[node].empty()) return std::nullopt;

  std::vector<std::int64_t> weights;
  for (const auto& c : pool.columns) weights.push_back(c.weight);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

  std::optional<std::vector<int>> best;
  std::int64_t limit = weights.back();
  for (;;) {
    search.chosen.clear();
    std::fill(search.covered.begin(), search.covered.end(), 0);
    if (!search.dfs(n * m, limit)) break;  // exhausted or out of time
    best = search.chosen;
    std::int64_t reached = 0;
    for (int c : search.chosen)
      reached = std::max(reached, pool.columns[c].weight);
    // restart strictly below what this cover achieved
    auto it = std::lower_bound(weights.begin(), weights.end(), reached);
    if (it == weights.begin()) break;
    limit = *std::prev(it);
  }
  if (!best) return std::nullopt;

  std::vector<std::vector<int>> paths;
  for (int c : *best) paths.push_back(pool.columns[c].path);
  std::sort(paths.begin(), paths.end());
  MbaSolution sol;
  sol.assign = std::move(paths);
  return sol;
}

ColgenResult colgen_solve(const MbaInstance& inst, double time_limit_seconds,
                          int L, const MbaSolution* seed) {
  require_valid(inst);
  const auto t0 = Clock::now();
  const bool unlimited = !(time_limit_seconds < 1e9);
  const int n = inst.n;
  const int m = inst.m;

  ColgenResult out;
  MbaSolution start;
  try {
    if (seed) {
      check_solution(inst, *seed);
      start = post_optimize(inst, *seed);
    } else {
      double step = unlimited || m <= 1
                        ? kInf
                        : std::max(0.05, 0.5 * time_limit_seconds / (m - 1));
      start = post_optimize(inst, greedy_lookahead(inst, L, step));
    }
  } catch (const InfeasibleError&) {
    out.report.status = Status::Infeasible;
    out.report.lower_bound = kInf;
    out.report.runtime_seconds = seconds_since(t0);
    return out;
  }
  std::int64_t inc_obj = objective(inst, start);

  ColumnPool pool;
  for (int k = 0; k < n; ++k) pool.add(inst, start.assign[k]);

  ColgenStats& st = out.stats;
  int stale_rounds = 0;
  for (;;) {
    MasterLpResult master = solve_master_lp(inst, pool);
    st.lp_values.push_back(master.value);
    if (!unlimited && seconds_since(t0) >= time_limit_seconds) break;
    if (stale_rounds >= 3) break;
    double slice =
        unlimited || m <= 1
            ? kInf
            : std::max(0.05, std::min(2.0, time_limit_seconds / (10.0 * (m - 1))));
    PricingResult priced = price(inst, master.duals, L, slice);
    ++st.rounds;
    bool gained = false;
    for (std::size_t idx = 0; idx < priced.columns.size(); ++idx)
      if (priced.reduced_costs[idx] < -1e-6 &&
          pool.add(inst, priced.columns[idx].path))
        gained = true;
    stale_rounds = gained ? 0 : stale_rounds + 1;
  }
  st.pre_seconds = seconds_since(t0);

  double ip_budget = unlimited ? kInf : std::max(1.0, 0.2 * time_limit_seconds);
  std::optional<MbaSolution> cover = solve_master_ip(inst, pool, ip_budget);
  st.master_seconds = seconds_since(t0) - st.pre_seconds;

  out.solution = start;
  if (cover) {
    std::int64_t v = objective(inst, *cover);
    if (v < inc_obj) {
      inc_obj = v;
      out.solution = *cover;
    }
  }
  st.master_ip_value = (double)inc_obj;
  st.columns_generated = (int)pool.columns.size();

  out.report.status = Status::Feasible;
  out.report.objective = inc_obj;
  out.report.lower_bound =
      st.lp_values.empty() ? 0.0 : std::min(st.lp_values.back(), (double)inc_obj);
  out.report.runtime_seconds = seconds_since(t0);
  out.report.node_or_iteration_count = (std::uint64_t)st.rounds;
  return out;
}

}  // namespace mba
