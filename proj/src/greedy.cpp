#include "mba/greedy.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "mba/exact.hpp"
#include "mba/matching.hpp"

namespace mba {

std::vector<std::vector<int>> greedy_steps(const MbaInstance& inst,
                                           const WeightMatrix& wm,
                                           const std::vector<int>& first_layer,
                                           const std::vector<double>& offsets) {
  const int n = inst.n, m = inst.m;
  std::vector<std::vector<int>> assign(n, std::vector<int>(m));
  std::vector<double> W = offsets;
  for (int k = 0; k < n; ++k) assign[k][0] = first_layer[k];
  for (int t = 0; t + 1 < m; ++t) {
    std::vector<std::tuple<int, int, double>> pairs;
    for (int k = 0; k < n; ++k)
      for (int e : inst.succ[t][assign[k][t]])
        pairs.emplace_back(k, e, W[k] + wm[e][t + 1]);
    BottleneckResult br;
    try {
      br = bottleneck_assignment(BipartiteProblem::from_pairs(n, pairs));
    } catch (const InfeasibleError&) {
      throw InfeasibleError("greedy: no perfect matching between layers " +
                            std::to_string(t + 1) + " and " +
                            std::to_string(t + 2));
    }
    for (int k = 0; k < n; ++k) {
      assign[k][t + 1] = br.assignment[k];
      W[k] += wm[br.assignment[k]][t + 1];
    }
  }
  return assign;
}

MbaSolution greedy_standard(const MbaInstance& inst, const WeightMatrix& wm) {
  std::vector<int> identity(inst.n);
  std::vector<double> offsets(inst.n);
  for (int k = 0; k < inst.n; ++k) {
    identity[k] = k;
    offsets[k] = wm[k][0];
  }
  return {greedy_steps(inst, wm, identity, offsets)};
}

MbaSolution greedy_standard(const MbaInstance& inst) {
  return greedy_standard(inst, to_weight_matrix(inst));
}

MbaSolution greedy_lookahead(const MbaInstance& inst, const WeightMatrix& wm,
                             int L, double step_time_limit) {
  if (L < 0) throw Error("greedy_lookahead: negative lookahead");
  if (L == 0) return greedy_standard(inst, wm);
  const int n = inst.n, m = inst.m;
  std::vector<std::vector<int>> assign(n, std::vector<int>(m));
  std::vector<int> frontier(n);
  std::vector<double> W(n);
  for (int k = 0; k < n; ++k) {
    assign[k][0] = k;
    frontier[k] = k;
    W[k] = wm[k][0];
  }
  for (int j = 0; j + 1 < m; ++j) {
    int last = std::min(j + L + 1, m - 1);  // window covers layers j..last
    int wm_layers = last - j + 1;
    MbaInstance win;
    win.n = n;
    win.m = wm_layers;
    win.weights.assign(n, std::vector<std::int64_t>(wm_layers, 0));
    win.arcs.assign(inst.arcs.begin() + j, inst.arcs.begin() + last);
    win.rebuild_adjacency();
    WeightMatrix win_wm(n, std::vector<double>(wm_layers, 0.0));
    for (int i = 0; i < n; ++i)
      for (int s = 1; s < wm_layers; ++s) win_wm[i][s] = wm[i][j + s];
    WindowResult wr = solve_window(win, win_wm, W, frontier, step_time_limit);
    if (wr.status == Status::Infeasible)
      throw InfeasibleError("greedy: window at layer " + std::to_string(j + 1) +
                            " is infeasible");
    for (int k = 0; k < n; ++k) {
      int e = wr.assign[k][1];
      assign[k][j + 1] = e;
      frontier[k] = e;
      W[k] += wm[e][j + 1];
    }
  }
  return {assign};
}

MbaSolution greedy_lookahead(const MbaInstance& inst, int L,
                             double step_time_limit) {
  return greedy_lookahead(inst, to_weight_matrix(inst), L, step_time_limit);
}

MbaSolution post_optimize(const MbaInstance& inst, const WeightMatrix& wm,
                          const MbaSolution& sol) {
  check_solution(inst, sol);
  const int n = inst.n, m = inst.m;
  MbaSolution cur = sol;
  double obj = objective_weighted(inst, wm, cur);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int t = 0; t + 1 < m; ++t) {
      std::vector<double> prefix(n, 0.0), suffix(n, 0.0);
      for (int k = 0; k < n; ++k) {
        for (int s = 0; s <= t; ++s) prefix[k] += wm[cur.assign[k][s]][s];
        for (int s = t + 1; s < m; ++s) suffix[k] += wm[cur.assign[k][s]][s];
      }
      std::vector<std::tuple<int, int, double>> pairs;
      for (int k = 0; k < n; ++k) {
        const std::vector<int>& nexts = inst.succ[t][cur.assign[k][t]];
        for (int k2 = 0; k2 < n; ++k2)
          if (std::binary_search(nexts.begin(), nexts.end(),
                                 cur.assign[k2][t + 1]))
            pairs.emplace_back(k, k2, prefix[k] + suffix[k2]);
      }
      BottleneckResult br =
          bottleneck_assignment(BipartiteProblem::from_pairs(n, pairs));
      if (br.value < obj) {
        MbaSolution next = cur;
        for (int k = 0; k < n; ++k)
          for (int s = t + 1; s < m; ++s)
            next.assign[k][s] = cur.assign[br.assignment[k]][s];
        double next_obj = objective_weighted(inst, wm, next);
        if (next_obj < obj) {  // recomputed, so float drift cannot loop
          cur = std::move(next);
          obj = next_obj;
          improved = true;
        }
      }
    }
  }
  return cur;
}

MbaSolution post_optimize(const MbaInstance& inst, const MbaSolution& sol) {
  return post_optimize(inst, to_weight_matrix(inst), sol);
}

}  // namespace mba
