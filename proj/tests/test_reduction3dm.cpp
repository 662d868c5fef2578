#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mba/instance.hpp"
#include "mba/reduction3dm.hpp"
#include "mba/rng.hpp"

using namespace mba;

namespace {

const char* kPaperYes = "2\n1 1 1\n2 2 2\n1 2 1\n";
const char* kNo = "2\n1 1 1\n1 2 1\n2 1 1\n";

// All perfect matchings of one cut, as right-element-per-left-element rows.
// Sizes here are tiny (n <= 8), so plain DFS with a bitmask is enough.
std::vector<std::vector<int>> cut_matchings(const MbaInstance& inst, int cut,
                                            std::size_t cap) {
  const int n = inst.n;
  std::vector<std::vector<int>> out;
  std::vector<int> match(n, -1);
  std::uint32_t used = 0;
  auto dfs = [&](auto&& self, int i) -> void {
    if (out.size() >= cap) return;
    if (i == n) {
      out.push_back(match);
      return;
    }
    for (int t : inst.succ[cut][i]) {
      if (used >> t & 1u) continue;
      used |= 1u << t;
      match[i] = t;
      self(self, i + 1);
      used &= ~(1u << t);
      match[i] = -1;
    }
  };
  dfs(dfs, 0);
  return out;
}

// Every feasible solution is a choice of one perfect matching per cut;
// enumerate all combinations.
std::vector<MbaSolution> all_solutions(const MbaInstance& inst,
                                       std::size_t cap) {
  std::vector<std::vector<std::vector<int>>> per_cut;
  for (int c = 0; c + 1 < inst.m; ++c) {
    per_cut.push_back(cut_matchings(inst, c, cap));
    REQUIRE_FALSE(per_cut.back().empty());
  }
  std::vector<MbaSolution> out;
  std::vector<std::size_t> pick(per_cut.size(), 0);
  for (;;) {
    MbaSolution sol;
    sol.assign.assign(inst.n, std::vector<int>(inst.m));
    for (int k = 0; k < inst.n; ++k) {
      sol.assign[k][0] = k;
      for (std::size_t c = 0; c < per_cut.size(); ++c)
        sol.assign[k][c + 1] = per_cut[c][pick[c]][sol.assign[k][c]];
    }
    out.push_back(std::move(sol));
    REQUIRE(out.size() <= cap);
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == per_cut[c].size()) pick[c++] = 0;
    if (c == pick.size()) break;
  }
  return out;
}

std::vector<int> nodes_of(const ReductionOutput& out, int column,
                          NodeKind kind, int block = -1) {
  std::vector<int> ids;
  for (int i = 0; i < out.instance.n; ++i) {
    const NodeMeta& nm = out.meta[column][i];
    if (nm.kind == kind && (block < 0 || nm.block == block)) ids.push_back(i);
  }
  return ids;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("three-dimensional matching files parse") {
  ThreeDmInstance t = three_dm_from_string(kPaperYes);
  CHECK(t.q == 2);
  REQUIRE(t.triples.size() == 3);
  CHECK(t.triples[0] == std::array<int, 3>{0, 0, 0});
  CHECK(t.triples[1] == std::array<int, 3>{1, 1, 1});
  CHECK(t.triples[2] == std::array<int, 3>{0, 1, 0});

  CHECK_THROWS_AS(three_dm_from_string(""), ParseError);
  CHECK_THROWS_AS(three_dm_from_string("2\n1 1\n"), ParseError);
  CHECK_THROWS_AS(three_dm_from_string("2\n1 1 x\n"), ParseError);
  CHECK_THROWS_AS(three_dm_from_string("0\n"), ValidationError);
  CHECK_THROWS_AS(three_dm_from_string("2\n1 1 3\n"), ValidationError);
  CHECK_THROWS_AS(three_dm_from_string("2\n1 1 1\n1 1 1\n"), ValidationError);
  CHECK_THROWS_AS(read_3dm("/nonexistent/file.3dm"), Error);

  const std::string path = temp_path("mba_test.3dm");
  std::ofstream(path) << kNo;
  ThreeDmInstance loaded = read_3dm(path);
  CHECK(loaded.q == 2);
  CHECK(loaded.triples.size() == 3);
  std::filesystem::remove(path);
}

TEST_CASE("brute-force matching decisions") {
  ThreeDmResult yes = solve_3dm_bruteforce(three_dm_from_string(kPaperYes));
  CHECK(yes.yes);
  CHECK(yes.witness == std::vector<int>{0, 1});

  CHECK_FALSE(solve_3dm_bruteforce(three_dm_from_string(kNo)).yes);

  ThreeDmResult one = solve_3dm_bruteforce(three_dm_from_string("1\n1 1 1\n"));
  CHECK(one.yes);
  CHECK(one.witness == std::vector<int>{0});

  ThreeDmInstance big;
  big.q = 9;
  for (int i = 0; i < 9; ++i) big.triples.push_back({i, i, i});
  CHECK_THROWS_AS(solve_3dm_bruteforce(big), Error);
}

TEST_CASE("single-gadget reduction of the worked example") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 1);
  CHECK_FALSE(out.used_canonical_no_core);
  CHECK(out.instance.n == 8);
  CHECK(out.instance.m == 3);
  CHECK(out.layer_heights == std::vector<std::int64_t>{1});
  CHECK(validate(out.instance).empty());

  CountCheckReport rep = count_check(out);
  CHECK(rep.ok);
  CHECK(rep.mismatches.empty());
  CHECK(rep.per_layer_totals == std::vector<std::int64_t>{24});
  CHECK(rep.bound == 60);

  for (const auto& row : out.instance.weights)
    for (auto w : row) CHECK((w == 0 || w == 1));

  // unit weights sit on the Z-sub-block of the first column and on the head
  // T-sub-block of the last column
  std::int64_t col_units[3] = {0, 0, 0};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < out.instance.n; ++i)
      col_units[c] += out.instance.weights[i][c];
  CHECK(col_units[0] == 2);
  CHECK(col_units[1] == 0);
  CHECK(col_units[2] == 3);
  for (int i : nodes_of(out, 0, NodeKind::Z))
    CHECK(out.instance.weights[i][0] == 1);
  for (int i : nodes_of(out, 2, NodeKind::THead))
    CHECK(out.instance.weights[i][2] == 1);
}

TEST_CASE("two-gadget reduction of the worked example") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 2);
  CHECK(out.instance.n == 34);
  CHECK(out.instance.m == 6);
  CHECK(out.layer_heights == std::vector<std::int64_t>{3, 2});
  CHECK(validate(out.instance).empty());

  CountCheckReport rep = count_check(out);
  CHECK(rep.ok);
  CHECK(rep.per_layer_totals == std::vector<std::int64_t>{102, 102});
  CHECK(rep.bound == 336);

  for (const auto& row : out.instance.weights)
    for (auto w : row) CHECK((w == 0 || w == 1));
}

TEST_CASE("minimal one-triple reduction passes all counts") {
  ReductionOutput out = build_reduction(three_dm_from_string("1\n1 1 1\n"), 1);
  CHECK(out.instance.n == 3);
  CHECK(out.instance.m == 3);
  CountCheckReport rep = count_check(out);
  CHECK(rep.ok);
  CHECK(rep.per_layer_totals == std::vector<std::int64_t>{9});
  CHECK(rep.bound == 9);

  GapVerdict v = verify_gap(three_dm_from_string("1\n1 1 1\n"), 1, true, 10.0);
  CHECK(v.yes);
  CHECK(v.conclusive);
  CHECK(v.objective == 1);
  CHECK(v.gap_holds);
}

TEST_CASE("tampered outputs are reported") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 1);

  ReductionOutput short_meta = out;
  short_meta.meta.back().pop_back();
  CHECK_FALSE(count_check(short_meta).ok);

  ReductionOutput heavy = out;
  std::vector<int> dummies = nodes_of(heavy, 1, NodeKind::Dummy);
  if (dummies.empty()) dummies = nodes_of(heavy, 1, NodeKind::TTail);
  heavy.instance.weights[dummies.front()][1] = 1;
  CHECK_FALSE(count_check(heavy).ok);

  ReductionOutput bent = out;
  bent.layer_heights[0] = 2;
  CHECK_FALSE(count_check(bent).ok);

  ReductionOutput retagged = out;
  std::vector<int> tails = nodes_of(retagged, 0, NodeKind::TTail);
  retagged.meta[0][tails.front()].kind = NodeKind::Dummy;
  CHECK_FALSE(count_check(retagged).ok);

  ReductionOutput shrunk = out;
  shrunk.instance.n -= 1;
  CHECK_FALSE(count_check(shrunk).ok);
}

TEST_CASE("count_check passes on random small inputs") {
  Rng rng(5150);
  for (int round = 0; round < 20; ++round) {
    int q = 1 + (int)rng.next_below(3);
    std::set<std::array<int, 3>> triples;
    for (int i = 0; i < q; ++i)  // a diagonal so p >= q
      triples.insert({i, i, i});
    int extra = (int)rng.next_below(4);
    for (int i = 0; i < extra; ++i)
      triples.insert({(int)rng.next_below(q), (int)rng.next_below(q),
                      (int)rng.next_below(q)});
    ThreeDmInstance t;
    t.q = q;
    t.triples.assign(triples.begin(), triples.end());
    int u = 1 + (int)rng.next_below(2);
    ReductionOutput out = build_reduction(t, u);
    CountCheckReport rep = count_check(out);
    CHECK(rep.ok);
    for (auto total : rep.per_layer_totals) CHECK(total <= rep.bound);
  }
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(build_reduction(three_dm_from_string(kPaperYes), 0), Error);
  ThreeDmInstance thin;
  thin.q = 3;
  thin.triples = {{0, 0, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(build_reduction(thin, 1), Error);
}

TEST_CASE("canonical fallback is a certified NO instance") {
  ThreeDmInstance core = canonical_no_core();
  CHECK_FALSE(solve_3dm_bruteforce(core).yes);
  ReductionOutput out = build_reduction(core, 1);
  CHECK_FALSE(out.used_canonical_no_core);
  CHECK(count_check(out).ok);
}

TEST_CASE("inputs outside the certificate get the canonical core") {
  // the second ground element of the middle set never occurs
  ThreeDmInstance t = three_dm_from_string("2\n1 1 1\n2 1 2\n");
  CHECK_FALSE(solve_3dm_bruteforce(t).yes);
  ReductionOutput out = build_reduction(t, 1);
  CHECK(out.used_canonical_no_core);
  CHECK(out.source.q == canonical_no_core().q);
  CHECK(out.source.triples == canonical_no_core().triples);
  CHECK(count_check(out).ok);

  GapVerdict v = verify_gap(t, 1, false, 60.0);
  CHECK_FALSE(v.yes);
  CHECK(v.expected == 2);
  CHECK(v.used_canonical_no_core);
  CHECK(v.conclusive);
  CHECK(v.objective == 2);
  CHECK(v.gap_holds);
}

TEST_CASE("tuple sub-block pairs are wired one arc per tuple") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 1);
  const int p = (int)out.source.triples.size();

  struct Family {
    int col_left;
    NodeKind left;
    NodeKind right;
  };
  // tail T of the first column feeds the tail T of the second; head T of the
  // second feeds the head T of the third
  for (Family f : {Family{0, NodeKind::TTail, NodeKind::TTail},
                   Family{1, NodeKind::THead, NodeKind::THead}}) {
    std::map<int, std::vector<int>> hits;  // left source -> right sources
    for (auto [a, b] : out.instance.arcs[f.col_left]) {
      const NodeMeta& ma = out.meta[f.col_left][a];
      const NodeMeta& mb = out.meta[f.col_left + 1][b];
      if (ma.kind == f.left && mb.kind == f.right)
        hits[ma.source].push_back(mb.source);
    }
    CHECK((int)hits.size() == p);
    for (auto& [src, partners] : hits) {
      CHECK(partners == std::vector<int>{src});
    }
  }

  // tail T of the second column reaches both T rows of the third, same tuple
  std::map<int, std::multiset<int>> spread;
  for (auto [a, b] : out.instance.arcs[1]) {
    const NodeMeta& ma = out.meta[1][a];
    const NodeMeta& mb = out.meta[2][b];
    if (ma.kind == NodeKind::TTail &&
        (mb.kind == NodeKind::THead || mb.kind == NodeKind::TTail))
      spread[ma.source].insert(mb.source);
  }
  CHECK((int)spread.size() == p);
  for (auto& [src, partners] : spread)
    CHECK(partners == std::multiset<int>{src, src});
}

TEST_CASE("each tuple node sees exactly one of its x and z elements") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 1);

  // head T nodes of the middle column: exactly one Z predecessor, and it is
  // the tuple's own z element
  for (int ht : nodes_of(out, 1, NodeKind::THead)) {
    int z_arcs = 0;
    for (auto [a, b] : out.instance.arcs[0])
      if (b == ht && out.meta[0][a].kind == NodeKind::Z) {
        ++z_arcs;
        CHECK(out.meta[0][a].source ==
              out.source.triples[out.meta[1][ht].source][2]);
      }
    CHECK(z_arcs == 1);
  }

  // tail T nodes of the last column in the top block: exactly one X
  // predecessor, the tuple's own x element
  const int top = (int)out.layer_heights[0];
  for (int tt : nodes_of(out, 2, NodeKind::TTail, top)) {
    int x_arcs = 0;
    for (auto [a, b] : out.instance.arcs[1])
      if (b == tt && out.meta[1][a].kind == NodeKind::X) {
        ++x_arcs;
        CHECK(out.meta[1][a].source ==
              out.source.triples[out.meta[2][tt].source][0]);
      }
    CHECK(x_arcs == 1);
  }
}

TEST_CASE("block wiring repeats identically across blocks") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 2);
  const int u = out.u;
  for (int k = 1; k <= u; ++k) {
    const int H = (int)out.layer_heights[k - 1];
    for (int t = 1; t <= 2; ++t) {
      const int c = 3 * (u - k) + (t - 1);
      // signature of one block: T-node source pairs crossing the cut
      std::set<std::vector<int>> signatures;
      for (int j = 1; j <= H; ++j) {
        std::vector<int> sig;
        for (auto [a, b] : out.instance.arcs[c]) {
          const NodeMeta& ma = out.meta[c][a];
          const NodeMeta& mb = out.meta[c + 1][b];
          if (ma.block != j || mb.block != j) continue;
          if ((ma.kind == NodeKind::THead || ma.kind == NodeKind::TTail) &&
              (mb.kind == NodeKind::THead || mb.kind == NodeKind::TTail))
            sig.push_back(((int)ma.kind * 8 + (int)mb.kind) * 10000 +
                          ma.source * 100 + mb.source);
        }
        std::sort(sig.begin(), sig.end());
        REQUIRE_FALSE(sig.empty());
        signatures.insert(sig);
      }
      CHECK(signatures.size() == 1);
    }
  }
}

TEST_CASE("full solution enumeration confirms the gap on one gadget") {
  struct Probe {
    ThreeDmInstance tdm;
    std::int64_t best;
  };
  for (const Probe& probe : {Probe{three_dm_from_string(kPaperYes), 1},
                             Probe{canonical_no_core(), 2}}) {
    ReductionOutput out = build_reduction(probe.tdm, 1);
    REQUIRE_FALSE(out.used_canonical_no_core);
    std::vector<MbaSolution> sols = all_solutions(out.instance, 100000);
    REQUIRE_FALSE(sols.empty());

    std::int64_t best = -1;
    for (const MbaSolution& sol : sols) {
      CHECK_NOTHROW(check_solution(out.instance, sol));
      std::int64_t obj = objective(out.instance, sol);
      if (best < 0 || obj < best) best = obj;

      // matchings restricted to T-sub-blocks must agree across blocks
      for (int c = 0; c + 1 < out.instance.m; ++c) {
        std::map<int, std::set<std::pair<int, int>>> per_block;
        for (int k = 0; k < out.instance.n; ++k) {
          const NodeMeta& ma = out.meta[c][sol.assign[k][c]];
          const NodeMeta& mb = out.meta[c + 1][sol.assign[k][c + 1]];
          if ((ma.kind == NodeKind::THead || ma.kind == NodeKind::TTail) &&
              (mb.kind == NodeKind::THead || mb.kind == NodeKind::TTail) &&
              ma.layer == mb.layer && ma.block == mb.block)
            per_block[ma.block].insert({ma.source, mb.source});
        }
        std::set<std::set<std::pair<int, int>>> distinct;
        for (auto& [block, pairs] : per_block) distinct.insert(pairs);
        CHECK(distinct.size() <= 1);
      }
    }
    CHECK(best == probe.best);
  }
}

TEST_CASE("gap verdicts match the matching decision") {
  GapVerdict yes1 = verify_gap(three_dm_from_string(kPaperYes), 1, false, 60.0);
  CHECK(yes1.yes);
  CHECK(yes1.expected == 1);
  CHECK(yes1.conclusive);
  CHECK(yes1.objective == 1);
  CHECK(yes1.gap_holds);
  CHECK(yes1.solver_status == Status::Optimal);

  GapVerdict no1 = verify_gap(three_dm_from_string(kNo), 1, false, 60.0);
  CHECK_FALSE(no1.yes);
  CHECK(no1.expected == 2);
  CHECK(no1.conclusive);
  CHECK(no1.objective == 2);
  CHECK(no1.gap_holds);

  GapVerdict no2 = verify_gap(three_dm_from_string(kNo), 2, false, 300.0);
  CHECK_FALSE(no2.yes);
  CHECK(no2.expected == 3);
  CHECK(no2.conclusive);
  CHECK(no2.objective == 3);
  CHECK(no2.gap_holds);

  GapVerdict yes2 = verify_gap(three_dm_from_string(kPaperYes), 2, false, 300.0);
  CHECK(yes2.yes);
  CHECK(yes2.expected == 1);
  CHECK(yes2.conclusive);
  CHECK(yes2.objective == 1);
  CHECK(yes2.gap_holds);
}

TEST_CASE("a starved solver yields an inconclusive verdict, never a wrong one") {
  GapVerdict v = verify_gap(three_dm_from_string(kNo), 2, false, 0.0);
  if (v.conclusive) {
    CHECK(v.objective == 3);
    CHECK(v.gap_holds);
  } else {
    CHECK_FALSE(v.gap_holds);
    CHECK(v.solver_status != Status::Optimal);
  }
}

TEST_CASE("reduction files carry instance and node metadata") {
  ReductionOutput out = build_reduction(three_dm_from_string(kPaperYes), 1);
  const std::string path = temp_path("mba_test_reduction.json");
  write_reduction(out, path);

  MbaInstance loaded = read_instance(path);
  CHECK(instance_to_string(loaded) == instance_to_string(out.instance));

  std::ifstream meta_in(path + ".meta.json");
  REQUIRE(meta_in.good());
  nlohmann::json j = nlohmann::json::parse(meta_in);
  CHECK(j["format"] == "mba-meta-v1");
  CHECK(j["u"] == 1);
  CHECK(j["q"] == 2);
  CHECK(j["p"] == 3);
  CHECK(j["used_canonical_no_core"] == false);
  CHECK(j["layer_heights"] == nlohmann::json::array({1}));
  REQUIRE(j["columns"].size() == 3);
  for (const auto& col : j["columns"]) CHECK(col.size() == 8);
  const auto& first = j["columns"][0][0];
  CHECK(first["kind"] == "z");
  CHECK(first["layer"] == 1);
  CHECK(first["column"] == 1);
  CHECK(first["block"] == 1);
  CHECK(first["source"] == 1);

  std::filesystem::remove(path);
  std::filesystem::remove(path + ".meta.json");
}
