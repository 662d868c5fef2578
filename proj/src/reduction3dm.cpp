#include "mba/reduction3dm.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "mba/exact.hpp"
#include "mba/matching.hpp"

namespace mba {

namespace {

void check_3dm(const ThreeDmInstance& t) {
  if (t.q <= 0) throw ValidationError("3dm: q must be positive");
  std::set<std::array<int, 3>> seen;
  for (std::size_t i = 0; i < t.triples.size(); ++i) {
    const auto& tr = t.triples[i];
    for (int c = 0; c < 3; ++c)
      if (tr[c] < 0 || tr[c] >= t.q)
        throw ValidationError("3dm: triple " + std::to_string(i + 1) +
                              " has a component outside 1.." +
                              std::to_string(t.q));
    if (!seen.insert(tr).second)
      throw ValidationError("3dm: duplicate triple " + std::to_string(i + 1));
  }
}

// occ[e] = indices of the triples whose component c equals e.
std::vector<std::vector<int>> occurrence_lists(const ThreeDmInstance& t,
                                               int c) {
  std::vector<std::vector<int>> occ(t.q);
  for (int a = 0; a < static_cast<int>(t.triples.size()); ++a)
    occ[t.triples[a][c]].push_back(a);
  return occ;
}

// Originating y element per Y node, occ(y)-1 copies each.
std::vector<int> y_copy_sources(const std::vector<std::vector<int>>& occ_y) {
  std::vector<int> ys;
  for (int e = 0; e < static_cast<int>(occ_y.size()); ++e)
    for (int c = 1; c < static_cast<int>(occ_y[e].size()); ++c)
      ys.push_back(e);
  return ys;
}

// Every cut of the built instance admits a perfect matching exactly when
// (a) the Z nodes and Y copies jointly saturate into the triples and (b) the
// X nodes do too. A YES instance satisfies both (match each element through
// its cover triple, spare Y copies through the leftover triples), so a
// failure here is a polynomial-time proof that the answer is NO.
bool construction_feasible(const ThreeDmInstance& t) {
  const int p = static_cast<int>(t.triples.size());
  auto occ_x = occurrence_lists(t, 0);
  auto occ_y = occurrence_lists(t, 1);
  auto occ_z = occurrence_lists(t, 2);
  std::vector<int> ys = y_copy_sources(occ_y);
  if (t.q + static_cast<int>(ys.size()) != p) return false;

  std::vector<std::tuple<int, int, double>> zy;
  for (int e = 0; e < t.q; ++e)
    for (int a : occ_z[e]) zy.emplace_back(e, a, 0.0);
  for (int i = 0; i < static_cast<int>(ys.size()); ++i)
    for (int a : occ_y[ys[i]]) zy.emplace_back(t.q + i, a, 0.0);
  if (maximum_matching(BipartiteProblem::from_pairs(p, zy)).cardinality != p)
    return false;

  std::vector<std::tuple<int, int, double>> xe;
  for (int e = 0; e < t.q; ++e)
    for (int a : occ_x[e]) xe.emplace_back(e, a, 0.0);
  return maximum_matching(BipartiteProblem::from_pairs(p, xe)).cardinality ==
         t.q;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t{1} << 40)) return std::int64_t{1} << 40;
    r *= base;
  }
  return r;
}

// Node layout shared by all three columns of a layer: gadget blocks first
// (2p nodes each), then the X-sub-block (q nodes), then dummies up to n.
struct Layout {
  int q = 0, p = 0, d = 0, u = 0, n = 0;
  std::vector<std::int64_t> H;  // H[k], layer k counted right to left

  int col(int k, int t) const { return 3 * (u - k) + (t - 1); }
  int block_base(int j) const { return (j - 1) * 2 * p; }
  int z_node(int j, int zi) const { return block_base(j) + zi; }
  int y_node(int j, int yi) const { return block_base(j) + q + yi; }
  int t1_node(int j, int a) const { return block_base(j) + q + d + a; }
  int head_node(int j, int a) const { return block_base(j) + a; }
  int tail_node(int j, int a) const { return block_base(j) + p + a; }
  int x_node(int k, int xi) const {
    return static_cast<int>(2 * static_cast<std::int64_t>(p) * H[k]) + xi;
  }
  int dummy_begin(int k) const { return x_node(k, 0) + q; }
};

Layout make_layout(const ThreeDmInstance& t, int u) {
  Layout L;
  L.q = t.q;
  L.p = static_cast<int>(t.triples.size());
  L.d = L.p - L.q;
  L.u = u;
  L.H.assign(u + 1, 0);
  std::int64_t n = 0;
  for (int k = 1; k <= u; ++k) {
    L.H[k] = ipow(L.q, k - 1) * ipow(L.p, u - k);
    n += L.q + 2 * static_cast<std::int64_t>(L.p) * L.H[k];
  }
  if (3 * static_cast<std::int64_t>(u) * n * n > 300'000'000)
    throw Error("reduction: instance would exceed the supported size");
  L.n = static_cast<int>(n);
  return L;
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::X: return "x";
    case NodeKind::Y: return "y";
    case NodeKind::Z: return "z";
    case NodeKind::THead: return "t-head";
    case NodeKind::TTail: return "t-tail";
    case NodeKind::Dummy: return "dummy";
  }
  return "?";
}

}  // namespace

ThreeDmInstance three_dm_from_string(const std::string& text) {
  std::istringstream in(text);
  ThreeDmInstance t;
  if (!(in >> t.q)) throw ParseError("3dm: missing set size");
  int x = 0, y = 0, z = 0;
  while (in >> x) {
    if (!(in >> y >> z)) throw ParseError("3dm: truncated triple");
    t.triples.push_back({x - 1, y - 1, z - 1});
  }
  if (!in.eof()) throw ParseError("3dm: expected an integer");
  check_3dm(t);
  return t;
}

ThreeDmInstance read_3dm(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return three_dm_from_string(ss.str());
}

ThreeDmInstance canonical_no_core() {
  ThreeDmInstance t;
  t.q = 2;
  t.triples = {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}};
  return t;
}

ReductionOutput build_reduction(const ThreeDmInstance& tdm, int u) {
  check_3dm(tdm);
  if (u <= 0) throw Error("reduction: u must be positive");
  if (static_cast<int>(tdm.triples.size()) < tdm.q)
    throw Error("reduction: needs at least q triples");

  ReductionOutput out;
  out.u = u;
  if (construction_feasible(tdm)) {
    out.source = tdm;
  } else {
    out.source = canonical_no_core();
    out.used_canonical_no_core = true;
  }
  const ThreeDmInstance& t = out.source;
  const Layout L = make_layout(t, u);
  const int n = L.n, m = 3 * u, q = L.q, p = L.p, d = L.d;
  for (int k = 1; k <= u; ++k) out.layer_heights.push_back(L.H[k]);

  auto occ_x = occurrence_lists(t, 0);
  auto occ_y = occurrence_lists(t, 1);
  auto occ_z = occurrence_lists(t, 2);
  std::vector<int> ys = y_copy_sources(occ_y);

  MbaInstance& inst = out.instance;
  inst.n = n;
  inst.m = m;
  inst.weights.assign(n, std::vector<std::int64_t>(m, 0));
  inst.arcs.assign(m - 1, {});
  out.meta.assign(m, std::vector<NodeMeta>(n));

  for (int k = 1; k <= u; ++k) {
    const int H = static_cast<int>(L.H[k]);
    for (int tc = 1; tc <= 3; ++tc) {
      auto& mc = out.meta[L.col(k, tc)];
      for (int j = 1; j <= H; ++j) {
        if (tc == 1) {
          for (int zi = 0; zi < q; ++zi)
            mc[L.z_node(j, zi)] = {k, tc, NodeKind::Z, j, zi};
          for (int yi = 0; yi < d; ++yi)
            mc[L.y_node(j, yi)] = {k, tc, NodeKind::Y, j, ys[yi]};
          for (int a = 0; a < p; ++a)
            mc[L.t1_node(j, a)] = {k, tc, NodeKind::TTail, j, a};
        } else {
          for (int a = 0; a < p; ++a)
            mc[L.head_node(j, a)] = {k, tc, NodeKind::THead, j, a};
          for (int a = 0; a < p; ++a)
            mc[L.tail_node(j, a)] = {k, tc, NodeKind::TTail, j, a};
        }
      }
      for (int xi = 0; xi < q; ++xi)
        mc[L.x_node(k, xi)] = {k, tc, NodeKind::X, 0, xi};
      int run = 0;
      for (int i = L.dummy_begin(k); i < n; ++i)
        mc[i] = {k, tc, NodeKind::Dummy, 0, run++};
    }
    const int c1 = L.col(k, 1);
    for (int j = 1; j <= H; ++j)
      for (int zi = 0; zi < q; ++zi) inst.weights[L.z_node(j, zi)][c1] = 1;
  }
  {
    const int c3 = L.col(1, 3);
    for (int j = 1; j <= static_cast<int>(L.H[1]); ++j)
      for (int a = 0; a < p; ++a) inst.weights[L.head_node(j, a)][c3] = 1;
  }

  auto add = [&inst](int c, int a, int b) {
    inst.arcs[c].push_back({a, b});
  };

  for (int k = 1; k <= u; ++k) {
    const int H = static_cast<int>(L.H[k]);
    const int db = L.dummy_begin(k);

    const int cA = L.col(k, 1);  // V1 column to V2 column
    for (int j = 1; j <= H; ++j) {
      for (int zi = 0; zi < q; ++zi)
        for (int a : occ_z[zi]) add(cA, L.z_node(j, zi), L.head_node(j, a));
      for (int yi = 0; yi < d; ++yi)
        for (int a : occ_y[ys[yi]]) add(cA, L.y_node(j, yi), L.head_node(j, a));
      for (int a = 0; a < p; ++a) add(cA, L.t1_node(j, a), L.tail_node(j, a));
    }
    for (int xi = 0; xi < q; ++xi) add(cA, L.x_node(k, xi), L.x_node(k, xi));
    for (int i = db; i < n; ++i)
      for (int i2 = db; i2 < n; ++i2) add(cA, i, i2);

    const int cB = L.col(k, 2);  // V2 column to V3 column
    for (int j = 1; j <= H; ++j)
      for (int a = 0; a < p; ++a) {
        add(cB, L.head_node(j, a), L.head_node(j, a));
        add(cB, L.tail_node(j, a), L.head_node(j, a));
        add(cB, L.tail_node(j, a), L.tail_node(j, a));
      }
    // Next block's heads reach back to this block's tails; with the
    // X-to-block-H and block-1-to-X arcs below this threads one chain of
    // spare capacity through the whole column pair.
    for (int j = 1; j < H; ++j)
      for (int a = 0; a < p; ++a)
        add(cB, L.head_node(j + 1, a), L.tail_node(j, a));
    for (int xi = 0; xi < q; ++xi)
      for (int a : occ_x[xi]) {
        add(cB, L.x_node(k, xi), L.tail_node(H, a));
        add(cB, L.head_node(1, a), L.x_node(k, xi));
      }
    for (int i = db; i < n; ++i)
      for (int i2 = db; i2 < n; ++i2) add(cB, i, i2);
  }

  // Seam between layer k (left) and layer k-1 (right).
  for (int k = 2; k <= u; ++k) {
    const int kr = k - 1;
    const int cC = L.col(k, 3);
    const int Hl = static_cast<int>(L.H[k]);
    const int Hr = static_cast<int>(L.H[kr]);
    const int dl = L.dummy_begin(k), dr = L.dummy_begin(kr);

    // Blocks of the right layer form p^(u-kr) groups of q^(kr-1); batches of
    // p groups fan their z nodes over q^kr consecutive left blocks, all p
    // head nodes each.
    const std::int64_t gsz = ipow(q, kr - 1);
    const std::int64_t qk = gsz * q;
    for (int jb = 1; jb <= Hr; ++jb) {
      const std::int64_t g0 = (jb - 1) / gsz;
      const std::int64_t b0 = (jb - 1) % gsz;
      const std::int64_t s0 = g0 / p;
      for (int l = 0; l < q; ++l) {
        const int B = static_cast<int>(s0 * qk + b0 * q + l) + 1;
        for (int a = 0; a < p; ++a)
          add(cC, L.head_node(B, a), L.z_node(jb, l));
      }
    }
    for (int j = 1; j <= Hl; ++j)
      for (int a = 0; a < p; ++a)
        for (int i = dr; i < n; ++i) add(cC, L.tail_node(j, a), i);
    for (int xi = 0; xi < q; ++xi)
      for (int i = dr; i < n; ++i) add(cC, L.x_node(k, xi), i);
    for (int i = dl; i < n; ++i) {
      for (int j = 1; j <= Hr; ++j) {
        for (int yi = 0; yi < d; ++yi) add(cC, i, L.y_node(j, yi));
        for (int a = 0; a < p; ++a) add(cC, i, L.t1_node(j, a));
      }
      for (int xi = 0; xi < q; ++xi) add(cC, i, L.x_node(kr, xi));
      for (int i2 = dr; i2 < n; ++i2) add(cC, i, i2);
    }
  }

  for (auto& av : inst.arcs) {
    std::sort(av.begin(), av.end());
    av.erase(std::unique(av.begin(), av.end()), av.end());
  }
  inst.rebuild_adjacency();
  require_valid(inst);
  return out;
}

CountCheckReport count_check(const ReductionOutput& out) {
  CountCheckReport r;
  auto bad = [&r](std::string msg) {
    r.ok = false;
    r.mismatches.push_back(std::move(msg));
  };

  const ThreeDmInstance& t = out.source;
  const int q = t.q;
  const int p = static_cast<int>(t.triples.size());
  const int d = p - q;
  const int u = out.u;
  if (u <= 0 || q <= 0 || p < q) {
    bad("parameters out of range");
    return r;
  }

  std::vector<std::int64_t> H(u + 1, 0);
  std::int64_t n64 = 0;
  for (int k = 1; k <= u; ++k) {
    H[k] = ipow(q, k - 1) * ipow(p, u - k);
    n64 += q + 2 * static_cast<std::int64_t>(p) * H[k];
  }
  const int m = 3 * u;
  r.bound = u * (3 * q + 6 * ipow(p, u + 1));

  if (out.instance.n != n64)
    bad("node count " + std::to_string(out.instance.n) + ", expected " +
        std::to_string(n64));
  if (out.instance.m != m)
    bad("layer count " + std::to_string(out.instance.m) + ", expected " +
        std::to_string(m));
  if (static_cast<int>(out.layer_heights.size()) != u)
    bad("height list has " + std::to_string(out.layer_heights.size()) +
        " entries, expected " + std::to_string(u));
  for (int k = 1; k <= u && k <= static_cast<int>(out.layer_heights.size());
       ++k)
    if (out.layer_heights[k - 1] != H[k])
      bad("layer " + std::to_string(k) + " height " +
          std::to_string(out.layer_heights[k - 1]) + ", expected " +
          std::to_string(H[k]));
  if (static_cast<int>(out.meta.size()) != m) {
    bad("metadata has " + std::to_string(out.meta.size()) + " columns");
    return r;
  }

  r.per_layer_totals.assign(u, 0);
  for (int k = 1; k <= u; ++k) {
    for (int tc = 1; tc <= 3; ++tc) {
      const int c = 3 * (u - k) + (tc - 1);
      const auto& mc = out.meta[c];
      if (static_cast<std::int64_t>(mc.size()) != n64) {
        bad("column " + std::to_string(c + 1) + " metadata has " +
            std::to_string(mc.size()) + " nodes");
        continue;
      }
      std::int64_t cnt[6] = {0, 0, 0, 0, 0, 0};
      for (const NodeMeta& nm : mc) {
        cnt[static_cast<int>(nm.kind)] += 1;
        if (nm.layer == k) r.per_layer_totals[k - 1] += 1;
        if (nm.layer != k || nm.column != tc)
          bad("column " + std::to_string(c + 1) +
              " carries a node tagged layer " + std::to_string(nm.layer) +
              " column " + std::to_string(nm.column));
      }
      auto expect = [&](NodeKind kind, std::int64_t want) {
        std::int64_t got = cnt[static_cast<int>(kind)];
        if (got != want)
          bad("column " + std::to_string(c + 1) + ": " + kind_name(kind) +
              " count " + std::to_string(got) + ", expected " +
              std::to_string(want));
      };
      expect(NodeKind::X, q);
      if (tc == 1) {
        expect(NodeKind::Z, q * H[k]);
        expect(NodeKind::Y, d * H[k]);
        expect(NodeKind::TTail, p * H[k]);
        expect(NodeKind::THead, 0);
      } else {
        expect(NodeKind::THead, p * H[k]);
        expect(NodeKind::TTail, p * H[k]);
        expect(NodeKind::Z, 0);
        expect(NodeKind::Y, 0);
      }
      expect(NodeKind::Dummy, n64 - 2 * p * H[k] - q);

      if (out.instance.n == n64 && out.instance.m == m) {
        std::int64_t units = 0;
        for (int i = 0; i < out.instance.n; ++i)
          units += out.instance.weights[i][c];
        std::int64_t want = tc == 1 ? q * H[k]
                            : (tc == 3 && k == 1) ? p * H[k]
                                                  : 0;
        if (units != want)
          bad("column " + std::to_string(c + 1) + ": weight total " +
              std::to_string(units) + ", expected " + std::to_string(want));
      }
    }
    if (r.per_layer_totals[k - 1] != 3 * n64)
      bad("layer " + std::to_string(k) + " total " +
          std::to_string(r.per_layer_totals[k - 1]) + ", expected " +
          std::to_string(3 * n64));
    if (r.per_layer_totals[k - 1] > r.bound)
      bad("layer " + std::to_string(k) + " total " +
          std::to_string(r.per_layer_totals[k - 1]) +
          " breaks the size bound " + std::to_string(r.bound));
  }
  return r;
}

ThreeDmResult solve_3dm_bruteforce(const ThreeDmInstance& tdm) {
  check_3dm(tdm);
  if (tdm.q > 8) throw Error("3dm brute force: q must be at most 8");
  auto occ_x = occurrence_lists(tdm, 0);
  std::vector<int> pick(tdm.q, -1);
  std::uint32_t used_y = 0, used_z = 0;
  auto dfs = [&](auto&& self, int x) -> bool {
    if (x == tdm.q) return true;
    for (int a : occ_x[x]) {
      const int y = tdm.triples[a][1], z = tdm.triples[a][2];
      if ((used_y >> y & 1u) || (used_z >> z & 1u)) continue;
      used_y |= 1u << y;
      used_z |= 1u << z;
      pick[x] = a;
      if (self(self, x + 1)) return true;
      used_y &= ~(1u << y);
      used_z &= ~(1u << z);
      pick[x] = -1;
    }
    return false;
  };
  ThreeDmResult res;
  if (dfs(dfs, 0)) {
    res.yes = true;
    res.witness = pick;
  }
  return res;
}

GapVerdict verify_gap(const ThreeDmInstance& tdm, int u, bool use_brute_force,
                      double time_limit_seconds) {
  ThreeDmResult three = solve_3dm_bruteforce(tdm);
  ReductionOutput red = build_reduction(tdm, u);
  GapVerdict v;
  v.yes = three.yes;
  v.expected = three.yes ? 1 : u + 1;
  v.used_canonical_no_core = red.used_canonical_no_core;
  ExactResult sol = use_brute_force
                        ? brute_force(red.instance)
                        : solve_exact(red.instance, time_limit_seconds);
  v.objective = sol.report.objective;
  v.solver_status = sol.report.status;
  v.conclusive = sol.report.status == Status::Optimal;
  v.gap_holds = v.conclusive && v.objective == v.expected;
  return v;
}

void write_reduction(const ReductionOutput& out, const std::string& path) {
  write_instance(out.instance, path);
  nlohmann::json j;
  j["format"] = "mba-meta-v1";
  j["u"] = out.u;
  j["q"] = out.source.q;
  j["p"] = out.source.triples.size();
  j["used_canonical_no_core"] = out.used_canonical_no_core;
  j["layer_heights"] = out.layer_heights;
  auto cols = nlohmann::json::array();
  for (const auto& col : out.meta) {
    auto jc = nlohmann::json::array();
    for (const NodeMeta& nm : col)
      jc.push_back({{"layer", nm.layer},
                    {"column", nm.column},
                    {"kind", kind_name(nm.kind)},
                    {"block", nm.block},
                    {"source", nm.source + 1}});
    cols.push_back(std::move(jc));
  }
  j["columns"] = std::move(cols);
  std::ofstream f(path + ".meta.json");
  if (!f) throw Error("cannot write " + path + ".meta.json");
  f << j.dump() << '\n';
}

}  // namespace mba
