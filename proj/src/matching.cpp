#include "mba/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace mba {

BipartiteProblem BipartiteProblem::from_pairs(
    int n, const std::vector<std::tuple<int, int, double>>& pairs) {
  BipartiteProblem p;
  p.n = n;
  p.adj.assign(n, {});
  p.val.assign(n, {});
  auto sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [i, j, v] : sorted) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw Error("matching: pair index out of range");
    // keep the cheaper value if the same pair is given twice
    if (!p.adj[i].empty() && p.adj[i].back() == j) continue;
    p.adj[i].push_back(j);
    p.val[i].push_back(v);
  }
  return p;
}

namespace {

constexpr int kUnmatched = -1;

// Hopcroft-Karp restricted to pairs with value <= limit.
struct HopcroftKarp {
  const BipartiteProblem& p;
  double limit;
  std::vector<int> match_l, match_r, dist;

  HopcroftKarp(const BipartiteProblem& prob, double lim)
      : p(prob), limit(lim),
        match_l(prob.n, kUnmatched),
        match_r(prob.n, kUnmatched),
        dist(prob.n, 0) {}

  bool bfs() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int i = 0; i < p.n; ++i) {
      if (match_l[i] == kUnmatched) {
        dist[i] = 0;
        q.push(i);
      } else {
        dist[i] = std::numeric_limits<int>::max();
      }
    }
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (std::size_t e = 0; e < p.adj[i].size(); ++e) {
        if (p.val[i][e] > limit) continue;
        int j = p.adj[i][e];
        int i2 = match_r[j];
        if (i2 == kUnmatched) {
          reachable_free = true;
        } else if (dist[i2] == std::numeric_limits<int>::max()) {
          dist[i2] = dist[i] + 1;
          q.push(i2);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int i) {
    for (std::size_t e = 0; e < p.adj[i].size(); ++e) {
      if (p.val[i][e] > limit) continue;
      int j = p.adj[i][e];
      int i2 = match_r[j];
      if (i2 == kUnmatched ||
          (dist[i2] == dist[i] + 1 && dfs(i2))) {
        match_l[i] = j;
        match_r[j] = i;
        return true;
      }
    }
    dist[i] = std::numeric_limits<int>::max();
    return false;
  }

  int run() {
    int size = 0;
    while (bfs()) {
      for (int i = 0; i < p.n; ++i)
        if (match_l[i] == kUnmatched && dfs(i)) ++size;
    }
    return size;
  }
};

// Kuhn's algorithm on the same restricted graph. Left nodes are processed in
// ascending order and every scan is ascending, so the result is a canonical
// representative of the optimum.
struct Kuhn {
  const BipartiteProblem& p;
  double limit;
  std::vector<int> match_r;
  std::vector<char> used;

  Kuhn(const BipartiteProblem& prob, double lim)
      : p(prob), limit(lim), match_r(prob.n, kUnmatched), used(prob.n, 0) {}

  bool try_left(int i) {
    for (std::size_t e = 0; e < p.adj[i].size(); ++e) {
      if (p.val[i][e] > limit) continue;
      int j = p.adj[i][e];
      if (used[j]) continue;
      used[j] = 1;
      if (match_r[j] == kUnmatched || try_left(match_r[j])) {
        match_r[j] = i;
        return true;
      }
    }
    return false;
  }

  bool run() {
    for (int i = 0; i < p.n; ++i) {
      std::fill(used.begin(), used.end(), 0);
      if (!try_left(i)) return false;
    }
    return true;
  }
};

BottleneckResult extract_matching(const BipartiteProblem& p, double limit) {
  Kuhn kuhn(p, limit);
  if (!kuhn.run()) throw Error("matching: extraction failed");  // unreachable
  BottleneckResult res;
  res.assignment.assign(p.n, kUnmatched);
  res.value = -kInf;
  for (int j = 0; j < p.n; ++j) res.assignment[kuhn.match_r[j]] = j;
  for (int i = 0; i < p.n; ++i) {
    int j = res.assignment[i];
    auto it = std::lower_bound(p.adj[i].begin(), p.adj[i].end(), j);
    res.value = std::max(res.value, p.val[i][it - p.adj[i].begin()]);
  }
  return res;
}

}  // namespace

MatchingResult maximum_matching(const BipartiteProblem& p) {
  HopcroftKarp hk(p, kInf);
  MatchingResult r;
  r.cardinality = hk.run();
  r.match_left = hk.match_l;
  return r;
}

BottleneckResult bottleneck_assignment(const BipartiteProblem& p) {
  if (p.n == 0) return {{}, -kInf};
  std::vector<double> values;
  for (int i = 0; i < p.n; ++i) {
    if (p.adj[i].empty())
      throw InfeasibleError("matching: left node " + std::to_string(i) +
                            " has no allowed partner");
    values.insert(values.end(), p.val[i].begin(), p.val[i].end());
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // smallest threshold admitting a perfect matching
  if (HopcroftKarp(p, values.back()).run() < p.n)
    throw InfeasibleError("matching: no perfect matching exists");
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (HopcroftKarp(p, values[mid]).run() == p.n)
      hi = mid;
    else
      lo = mid + 1;
  }
  return extract_matching(p, values[lo]);
}

}  // namespace mba
