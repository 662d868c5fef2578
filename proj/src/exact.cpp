#include "mba/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <queue>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mba/greedy.hpp"
#include "mba/matching.hpp"

namespace mba {

CompletionTable min_completion(const MbaInstance& inst, const WeightMatrix& wm) {
  CompletionTable t;
  t.c.assign(inst.n, std::vector<double>(inst.m, kInf));
  for (int i = 0; i < inst.n; ++i) t.c[i][inst.m - 1] = wm[i][inst.m - 1];
  for (int j = inst.m - 2; j >= 0; --j) {
    for (int i = 0; i < inst.n; ++i) {
      double best = kInf;
      for (int i2 : inst.succ[j][i]) best = std::min(best, t.c[i2][j + 1]);
      t.c[i][j] = best == kInf ? kInf : wm[i][j] + best;
    }
  }
  return t;
}

CompletionTable min_completion(const MbaInstance& inst) {
  return min_completion(inst, to_weight_matrix(inst));
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Key128 {
  std::uint64_t a = 0, b = 0;
  bool operator==(const Key128& o) const { return a == o.a && b == o.b; }
};
struct Key128Hash {
  std::size_t operator()(const Key128& k) const {
    return k.a ^ (k.b * 0x9e3779b97f4a7c15ULL);
  }
};

// ---------------------------------------------------------------------------
// Lazy enumeration of the perfect matchings of one cut, in nondecreasing
// order of the bottleneck value max_k (D[source] + w[target]).
//
// Elements with equal accumulated weight and equal successor set are
// interchangeable, so they are collapsed into classes on both sides of the
// cut and a "matching" becomes a count matrix: how many elements of right
// class r continue left class c. This keeps instances with large
// interchangeable groups (the reduction's dummy blocks) from exploding into
// factorially many equivalent branches. On instances with distinct weights
// every class is a singleton and this degenerates to plain matchings.
//
// Enumeration partitions the space on the first cell where a matrix deviates
// from the popped representative (forced prefix, then "less at this cell" /
// "more at this cell" children), each child solved as a bottleneck
// transportation problem: threshold search over the distinct cell values
// with a max-flow feasibility test per threshold.
// ---------------------------------------------------------------------------

struct Sub {
  double key = 0.0;       // bottleneck value of the representative
  std::vector<int> flat;  // representative counts per cell (canonical order)
  std::vector<int> lb, ub;
};

struct SubOrder {  // min-heap: smallest key first, then lowest count vector
  bool operator()(const Sub& a, const Sub& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.flat > b.flat;
  }
};

// Dinic on the tiny class-to-class graph. Node 0 = source, 1..L = left
// classes, L+1..L+R = right classes, L+R+1 = sink.
class TinyFlow {
 public:
  void reset(int nodes) {
    head_.assign(nodes, -1);
    to_.clear();
    cap_.clear();
    next_.clear();
    n_ = nodes;
  }
  void add_edge(int a, int b, int cap) {
    to_.push_back(b); cap_.push_back(cap); next_.push_back(head_[a]);
    head_[a] = (int)to_.size() - 1;
    to_.push_back(a); cap_.push_back(0); next_.push_back(head_[b]);
    head_[b] = (int)to_.size() - 1;
  }
  int max_flow(int s, int t) {
    int total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      int f;
      while ((f = dfs(s, t, 1 << 30)) > 0) total += f;
    }
    return total;
  }
  int edge_flow(int id) const { return cap_[id ^ 1]; }  // id from add order * 2

 private:
  bool bfs(int s, int t) {
    level_.assign(n_, -1);
    level_[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front(); q.pop();
      for (int e = head_[v]; e != -1; e = next_[e])
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          q.push(to_[e]);
        }
    }
    return level_[t] >= 0;
  }
  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& e = iter_[v]; e != -1; e = next_[e]) {
      int u = to_[e];
      if (cap_[e] > 0 && level_[u] == level_[v] + 1) {
        int got = dfs(u, t, std::min(f, cap_[e]));
        if (got > 0) {
          cap_[e] -= got;
          cap_[e ^ 1] += got;
          return got;
        }
      }
    }
    return 0;
  }
  int n_ = 0;
  std::vector<int> head_, to_, cap_, next_, level_, iter_;
};

class MatchingStream {
 public:
  // D: accumulated weight per element of layer `cut`; matchings target layer
  // cut+1 with weights wm. Only assignments whose key stays below `cap` are
  // ever kept (anything at or above it is useless to the caller).
  MatchingStream(const MbaInstance& inst, const WeightMatrix& wm, int cut,
                 const std::vector<double>& D, double cap);

  bool empty() const { return heap_.empty(); }
  double next_key() const { return heap_.top().key; }

  // Pops the cheapest assignment and enqueues its partition children.
  Sub pop(double cap);

  struct Committed {
    std::vector<std::vector<int>> members;  // left class -> elements, ascending
    std::vector<std::vector<int>> matched;  // left class -> targets, ascending
    std::vector<double> D_next;             // per element of layer cut+1
  };
  Committed materialize(const Sub& s) const;

 private:
  std::optional<Sub> solve(const std::vector<int>& lb, const std::vector<int>& ub,
                           double cap);
  bool feasible(double threshold, const std::vector<int>& lb,
                const std::vector<int>& ub, std::vector<int>* counts_out);

  const MbaInstance& inst_;
  const WeightMatrix& wm_;
  int cut_;
  int n_;
  int L_ = 0, R_ = 0;
  std::vector<std::vector<int>> members_;   // per left class
  std::vector<double> class_w_;             // accumulated weight per left class
  std::vector<std::vector<int>> rmembers_;  // per right class
  std::vector<double> rw_;                  // node weight per right class
  struct Cell { int c, r; double val; };
  std::vector<Cell> cells_;                 // allowed cells, class-major order
  std::vector<int> cell_of_;                // L_*R_ -> cell index or -1
  std::vector<int> lsum_, rsum_;            // scratch: forced totals
  TinyFlow flow_;
  std::priority_queue<Sub, std::vector<Sub>, SubOrder> heap_;
};

MatchingStream::MatchingStream(const MbaInstance& inst, const WeightMatrix& wm,
                               int cut, const std::vector<double>& D, double cap)
    : inst_(inst), wm_(wm), cut_(cut), n_(inst.n) {
  // left classes: (accumulated weight, successor set)
  {
    std::map<std::pair<double, std::vector<int>>, int> groups;
    for (int e = 0; e < n_; ++e) {
      auto key = std::make_pair(D[e], inst.succ[cut][e]);
      auto [it, fresh] = groups.emplace(std::move(key), (int)members_.size());
      if (fresh) {
        members_.push_back({});
        class_w_.push_back(D[e]);
      }
      members_[it->second].push_back(e);
    }
    L_ = (int)members_.size();
  }
  // right classes: (node weight, own successor set, which left classes allow it)
  {
    std::vector<std::vector<char>> allowed_by(n_, std::vector<char>(L_, 0));
    for (int c = 0; c < L_; ++c)
      for (int e : inst.succ[cut][members_[c][0]]) allowed_by[e][c] = 1;
    static const std::vector<int> kNoSucc;
    std::map<std::tuple<double, std::vector<int>, std::vector<char>>, int> groups;
    int next_layer = cut_ + 1;
    for (int e = 0; e < n_; ++e) {
      const std::vector<int>& fwd =
          next_layer + 1 < inst.m ? inst.succ[next_layer][e] : kNoSucc;
      auto key = std::make_tuple(wm[e][next_layer], fwd, allowed_by[e]);
      auto [it, fresh] = groups.emplace(std::move(key), (int)rmembers_.size());
      if (fresh) {
        rmembers_.push_back({});
        rw_.push_back(wm[e][next_layer]);
      }
      rmembers_[it->second].push_back(e);
    }
    R_ = (int)rmembers_.size();
    cell_of_.assign((std::size_t)L_ * R_, -1);
    for (int c = 0; c < L_; ++c)
      for (int r = 0; r < R_; ++r)
        if (allowed_by[rmembers_[r][0]][c]) {
          cell_of_[(std::size_t)c * R_ + r] = (int)cells_.size();
          cells_.push_back({c, r, class_w_[c] + rw_[r]});
        }
  }
  std::vector<int> lb(cells_.size(), 0), ub(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i)
    ub[i] = std::min((int)members_[cells_[i].c].size(),
                     (int)rmembers_[cells_[i].r].size());
  if (auto root = solve(lb, ub, cap)) heap_.push(std::move(*root));
}

bool MatchingStream::feasible(double threshold, const std::vector<int>& lb,
                              const std::vector<int>& ub,
                              std::vector<int>* counts_out) {
  lsum_.assign(L_, 0);
  rsum_.assign(R_, 0);
  int forced = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (lb[i] == 0) continue;
    if (cells_[i].val > threshold) return false;
    lsum_[cells_[i].c] += lb[i];
    rsum_[cells_[i].r] += lb[i];
    forced += lb[i];
  }
  for (int c = 0; c < L_; ++c)
    if (lsum_[c] > (int)members_[c].size()) return false;
  for (int r = 0; r < R_; ++r)
    if (rsum_[r] > (int)rmembers_[r].size()) return false;

  int s = 0, t = L_ + R_ + 1;
  flow_.reset(L_ + R_ + 2);
  std::vector<int> cell_edge(cells_.size(), -1);
  int edge_id = 0;
  for (int c = 0; c < L_; ++c) {
    flow_.add_edge(s, 1 + c, (int)members_[c].size() - lsum_[c]);
    edge_id += 2;
  }
  for (int r = 0; r < R_; ++r) {
    flow_.add_edge(1 + L_ + r, t, (int)rmembers_[r].size() - rsum_[r]);
    edge_id += 2;
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].val > threshold) continue;
    int cap = ub[i] - lb[i];
    if (cap <= 0) continue;
    cell_edge[i] = edge_id;
    flow_.add_edge(1 + cells_[i].c, 1 + L_ + cells_[i].r, cap);
    edge_id += 2;
  }
  if (flow_.max_flow(s, t) != n_ - forced) return false;
  if (counts_out) {
    counts_out->assign(cells_.size(), 0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      (*counts_out)[i] = lb[i];
      if (cell_edge[i] >= 0) (*counts_out)[i] += flow_.edge_flow(cell_edge[i]);
    }
  }
  return true;
}

std::optional<Sub> MatchingStream::solve(const std::vector<int>& lb,
                                         const std::vector<int>& ub, double cap) {
  double floor_val = -kInf;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (lb[i] > 0) floor_val = std::max(floor_val, cells_[i].val);
  if (floor_val >= cap) return std::nullopt;
  std::vector<double> values;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (ub[i] > lb[i] && cells_[i].val >= floor_val && cells_[i].val < cap)
      values.push_back(cells_[i].val);
  if (floor_val > -kInf) values.push_back(floor_val);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) return std::nullopt;
  if (!feasible(values.back(), lb, ub, nullptr)) return std::nullopt;
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(values[mid], lb, ub, nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  Sub s;
  feasible(values[lo], lb, ub, &s.flat);
  s.key = values[lo];
  s.lb = lb;
  s.ub = ub;
  return s;
}

Sub MatchingStream::pop(double cap) {
  Sub top = std::move(const_cast<Sub&>(heap_.top()));
  heap_.pop();
  // Partition on the first deviating cell: children pin the prefix to the
  // representative and push the current cell strictly below / above it.
  std::vector<int> lb = top.lb, ub = top.ub;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (top.flat[i] > top.lb[i]) {
      int keep = ub[i];
      ub[i] = top.flat[i] - 1;
      if (auto child = solve(lb, ub, cap)) heap_.push(std::move(*child));
      ub[i] = keep;
    }
    if (top.flat[i] < top.ub[i] &&
        std::max(top.key, cells_[i].val) < cap) {
      int keep = lb[i];
      lb[i] = top.flat[i] + 1;
      if (auto child = solve(lb, ub, cap)) heap_.push(std::move(*child));
      lb[i] = keep;
    }
    lb[i] = ub[i] = top.flat[i];  // pin for the remaining cells
  }
  return top;
}

MatchingStream::Committed MatchingStream::materialize(const Sub& s) const {
  Committed out;
  out.members = members_;
  out.matched.assign(L_, {});
  out.D_next.assign(n_, 0.0);
  int next_layer = cut_ + 1;
  for (int r = 0; r < R_; ++r) {
    std::size_t offset = 0;
    for (int c = 0; c < L_; ++c) {
      int id = cell_of_[(std::size_t)c * R_ + r];
      if (id < 0) continue;
      for (int k = 0; k < s.flat[id]; ++k) {
        int e = rmembers_[r][offset++];
        out.matched[c].push_back(e);
        out.D_next[e] = class_w_[c] + wm_[e][next_layer];
      }
    }
  }
  for (auto& v : out.matched) std::sort(v.begin(), v.end());
  return out;
}

// ---------------------------------------------------------------------------
// Depth-first search over layers with the stream above as child generator.
// ---------------------------------------------------------------------------

constexpr std::size_t kDedupCap = 5'000'000;

class Core {
 public:
  Core(const MbaInstance& inst, const WeightMatrix& wm,
       std::vector<int> root_perm, std::vector<double> root_W,
       std::vector<std::vector<int>> seed_assign, double seed_obj,
       double time_limit)
      : inst_(inst), wm_(wm), root_perm_(std::move(root_perm)) {
    no_deadline_ = !(time_limit < 1e9);
    deadline_ = no_deadline_
                    ? Clock::time_point::max()
                    : Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(
                                             std::max(time_limit, 0.0)));
    inc_assign_ = std::move(seed_assign);
    inc_obj_ = seed_obj;
    root_D_.assign(inst.n, 0.0);
    for (int k = 0; k < inst_.n; ++k) root_D_[root_perm_[k]] = root_W[k];

    CompletionTable ct = min_completion(inst, wm);
    after_.assign(inst.n, std::vector<double>(inst.m, 0.0));
    lambda_.assign(inst.m, kInf);
    for (int j = 0; j < inst.m; ++j)
      for (int i = 0; i < inst.n; ++i) {
        after_[i][j] = ct.c[i][j] == kInf ? kInf : ct.c[i][j] - wm[i][j];
        lambda_[j] = std::min(lambda_[j], after_[i][j]);
      }
    // successor-set group ids per layer, for the state keys
    gid_.assign(inst.m, std::vector<int>(inst.n, 0));
    for (int j = 0; j + 1 < inst.m; ++j) {
      std::map<std::vector<int>, int> groups;
      for (int e = 0; e < inst.n; ++e) {
        auto [it, fresh] = groups.emplace(inst.succ[j][e], (int)groups.size());
        gid_[j][e] = it->second;
      }
    }
    path_.resize(std::max(inst.m - 1, 0));
    seen_.resize(inst.m);
  }

  WindowResult run() {
    dfs(0, root_D_);
    WindowResult res;
    res.nodes = nodes_;
    res.objective = inc_obj_;
    if (!out_of_time_ || open_min_ == kInf) {
      res.status = Status::Optimal;
      res.lower_bound = inc_obj_;
    } else {
      res.status = improved_ ? Status::Feasible : Status::TimeLimit;
      res.lower_bound = std::min(inc_obj_, open_min_);
    }
    res.assign = std::move(inc_assign_);
    return res;
  }

 private:
  bool dedup_keep(int depth, const std::vector<double>& D) {
    std::vector<std::pair<int, double>> items(inst_.n);
    for (int e = 0; e < inst_.n; ++e) items[e] = {gid_[depth][e], D[e]};
    std::sort(items.begin(), items.end());
    std::uint64_t a = 0x2545f4914f6cdd1dULL, b = 0x9e3779b97f4a7c15ULL;
    for (auto& [g, d] : items) {
      if (d == 0.0) d = 0.0;  // merge the two zero bit patterns
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      a = mix64(a ^ (bits + (std::uint64_t)g * 0xd6e8feb86659fd93ULL));
      b = mix64(b + bits + (std::uint64_t)g);
    }
    Key128 key{a, b};
    auto& set = seen_[(std::size_t)depth];
    if (set.count(key)) return false;
    if (dedup_count_ < kDedupCap) {
      set.insert(key);
      ++dedup_count_;
    }
    return true;
  }

  void dfs(int depth, const std::vector<double>& D) {
    ++nodes_;
    if (depth == inst_.m - 1) {
      double obj = *std::max_element(D.begin(), D.end());
      if (obj < inc_obj_) {
        inc_obj_ = obj;
        improved_ = true;
        snapshot();
      }
      return;
    }
    MatchingStream stream(inst_, wm_, depth, D,
                          inc_obj_ == kInf ? kInf : inc_obj_ - lambda_[depth + 1]);
    while (!stream.empty()) {
      if (!out_of_time_ && !no_deadline_ && Clock::now() >= deadline_)
        out_of_time_ = true;
      if (out_of_time_) {
        open_min_ = std::min(open_min_, stream.next_key() + lambda_[depth + 1]);
        return;
      }
      if (stream.next_key() + lambda_[depth + 1] >= inc_obj_) return;
      double cap = inc_obj_ == kInf ? kInf : inc_obj_ - lambda_[depth + 1];
      Sub child = stream.pop(cap);
      MatchingStream::Committed cm = stream.materialize(child);
      double bound = -kInf;
      for (int e = 0; e < inst_.n; ++e)
        bound = std::max(bound, cm.D_next[e] + after_[e][depth + 1]);
      if (bound >= inc_obj_) continue;
      if (depth + 1 < inst_.m - 1 && !dedup_keep(depth + 1, cm.D_next)) continue;
      path_[depth].members = std::move(cm.members);
      path_[depth].matched = std::move(cm.matched);
      dfs(depth + 1, cm.D_next);
      if (out_of_time_) {
        if (!stream.empty())
          open_min_ = std::min(open_min_, stream.next_key() + lambda_[depth + 1]);
        return;
      }
    }
  }

  void snapshot() {
    std::vector<std::vector<int>> succ_of(inst_.m - 1, std::vector<int>(inst_.n));
    for (int t = 0; t + 1 < inst_.m; ++t)
      for (std::size_t c = 0; c < path_[t].members.size(); ++c)
        for (std::size_t i = 0; i < path_[t].members[c].size(); ++i)
          succ_of[t][path_[t].members[c][i]] = path_[t].matched[c][i];
    inc_assign_.assign(inst_.n, std::vector<int>(inst_.m));
    for (int k = 0; k < inst_.n; ++k) {
      int e = root_perm_[k];
      inc_assign_[k][0] = e;
      for (int t = 0; t + 1 < inst_.m; ++t) {
        e = succ_of[t][e];
        inc_assign_[k][t + 1] = e;
      }
    }
  }

  struct LevelRec {
    std::vector<std::vector<int>> members;
    std::vector<std::vector<int>> matched;
  };

  const MbaInstance& inst_;
  const WeightMatrix& wm_;
  std::vector<int> root_perm_;
  std::vector<double> root_D_;
  std::vector<std::vector<double>> after_;  // after_[i][j]: continuation past (i,j)
  std::vector<double> lambda_;              // min continuation per layer
  std::vector<std::vector<int>> gid_;
  std::vector<LevelRec> path_;
  std::vector<std::unordered_set<Key128, Key128Hash>> seen_;
  std::size_t dedup_count_ = 0;
  double inc_obj_ = kInf;
  std::vector<std::vector<int>> inc_assign_;
  bool improved_ = false;
  double open_min_ = kInf;
  bool out_of_time_ = false;
  bool no_deadline_ = false;
  Clock::time_point deadline_;
  std::int64_t nodes_ = 0;
};

double assign_objective(const WeightMatrix& wm,
                        const std::vector<std::vector<int>>& assign,
                        const std::vector<double>* offsets) {
  double worst = -kInf;
  for (std::size_t k = 0; k < assign.size(); ++k) {
    double s = offsets ? (*offsets)[k] : 0.0;
    for (std::size_t j = offsets ? 1 : 0; j < assign[k].size(); ++j)
      s += wm[assign[k][j]][j];
    worst = std::max(worst, s);
  }
  return worst;
}

}  // namespace

ExactResult solve_exact(const MbaInstance& inst, double time_limit_seconds,
                        const MbaSolution* warm_start) {
  auto t0 = Clock::now();
  require_valid(inst);
  WeightMatrix wm = to_weight_matrix(inst);
  ExactResult res;
  MbaSolution seed;
  if (warm_start) {
    check_solution(inst, *warm_start);
    seed = *warm_start;
  } else {
    try {
      seed = greedy_standard(inst);
    } catch (const InfeasibleError&) {
      res.report.status = Status::Infeasible;
      res.report.objective = 0;
      res.report.lower_bound = kInf;
      res.report.runtime_seconds =
          std::chrono::duration<double>(Clock::now() - t0).count();
      return res;
    }
  }
  double seed_obj = (double)objective(inst, seed);
  std::vector<int> identity(inst.n);
  for (int k = 0; k < inst.n; ++k) identity[k] = k;
  std::vector<double> root_W(inst.n);
  for (int k = 0; k < inst.n; ++k) root_W[k] = wm[k][0];
  Core core(inst, wm, identity, root_W, seed.assign, seed_obj,
            time_limit_seconds);
  WindowResult w = core.run();
  res.solution.assign = std::move(w.assign);
  check_solution(inst, res.solution);
  res.report.status = w.status;
  res.report.objective = (std::int64_t)std::llround(w.objective);
  res.report.lower_bound = w.lower_bound;
  res.report.node_or_iteration_count = w.nodes;
  res.report.runtime_seconds =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

WindowResult solve_window(const MbaInstance& inst, const WeightMatrix& wm,
                          const std::vector<double>& offsets,
                          const std::vector<int>& fixed_first_layer,
                          double time_limit_seconds) {
  WindowResult res;
  std::vector<std::vector<int>> seed;
  try {
    seed = greedy_steps(inst, wm, fixed_first_layer, offsets);
  } catch (const InfeasibleError&) {
    res.status = Status::Infeasible;
    return res;
  }
  double seed_obj = assign_objective(wm, seed, &offsets);
  Core core(inst, wm, fixed_first_layer, offsets, std::move(seed), seed_obj,
            time_limit_seconds);
  return core.run();
}

ExactResult brute_force(const MbaInstance& inst) {
  auto t0 = Clock::now();
  require_valid(inst);
  if (inst.n > 6 || inst.m > 5)
    throw Error("brute_force: refusing instances beyond n=6, m=5");
  const int n = inst.n, m = inst.m;
  std::vector<std::vector<int>> assign(n, std::vector<int>(m));
  std::vector<std::int64_t> W(n);
  for (int k = 0; k < n; ++k) {
    assign[k][0] = k;
    W[k] = inst.weights[k][0];
  }
  std::int64_t best = -1;
  std::vector<std::vector<int>> best_assign;
  std::vector<std::vector<char>> used(m, std::vector<char>(n, 0));
  std::int64_t nodes = 0;

  // layer j, tuple k: extend tuple k into layer j and recurse
  auto rec = [&](auto&& self, int j, int k) -> void {
    ++nodes;
    if (j == m) {
      std::int64_t obj = *std::max_element(W.begin(), W.end());
      if (best < 0 || obj < best) {
        best = obj;
        best_assign = assign;
      }
      return;
    }
    if (k == n) {
      self(self, j + 1, 0);
      return;
    }
    for (int e : inst.succ[j - 1][assign[k][j - 1]]) {
      if (used[j][e]) continue;
      std::int64_t w = W[k] + inst.weights[e][j];
      if (best >= 0 && w >= best) continue;
      used[j][e] = 1;
      assign[k][j] = e;
      std::int64_t keep = W[k];
      W[k] = w;
      self(self, j, k + 1);
      W[k] = keep;
      used[j][e] = 0;
    }
  };
  if (m == 1) {
    best = *std::max_element(W.begin(), W.end());
    best_assign = assign;
  } else {
    rec(rec, 1, 0);
  }

  ExactResult res;
  res.report.runtime_seconds =
      std::chrono::duration<double>(Clock::now() - t0).count();
  res.report.node_or_iteration_count = nodes;
  if (best < 0) {
    res.report.status = Status::Infeasible;
    res.report.objective = 0;
    res.report.lower_bound = kInf;
  } else {
    res.report.status = Status::Optimal;
    res.report.objective = best;
    res.report.lower_bound = (double)best;
    res.solution.assign = std::move(best_assign);
  }
  return res;
}

}  // namespace mba
