#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mba/common.hpp"
#include "mba/instance.hpp"

namespace mba {

// Three-dimensional matching instance over ground sets of size q, elements
// 0-based in memory (files are 1-based).
struct ThreeDmInstance {
  int q = 0;
  std::vector<std::array<int, 3>> triples;  // (x, y, z)
};

// File format: first the integer q, then one "x y z" triple per line.
ThreeDmInstance read_3dm(const std::string& path);
ThreeDmInstance three_dm_from_string(const std::string& text);

enum class NodeKind { X, Y, Z, THead, TTail, Dummy };

// Where a node of the built instance comes from. block is 1-based within the
// gadget, 0 for the X-sub-block and dummy nodes. source is the element or
// triple index (0-based); for Y nodes the originating y element, for dummies
// a running counter.
struct NodeMeta {
  int layer = 0;   // 1..u, counted right to left
  int column = 0;  // 1..3 within the layer
  NodeKind kind = NodeKind::Dummy;
  int block = 0;
  int source = 0;
};

struct ReductionOutput {
  MbaInstance instance;                     // m = 3u, weights in {0,1}
  std::vector<std::vector<NodeMeta>> meta;  // meta[column][element]
  std::vector<std::int64_t> layer_heights;  // height of layer k at [k-1]
  ThreeDmInstance source;                   // instance actually encoded
  int u = 0;
  bool used_canonical_no_core = false;
};

// Fixed NO instance with every element occurring and all block matchings
// available; substituted when the input fails the feasibility certificate.
ThreeDmInstance canonical_no_core();

// Builds the layered gadget instance: one gadget per layer (heights
// q^(k-1)p^(u-k)), unit weights on every Z-sub-block and on the head
// T-sub-blocks of layer 1, dummies balancing all columns to a common n.
// Inputs whose (Z+Y)-to-T or X-to-T matchings cannot saturate (a
// polynomial-time proof that the 3DM answer is NO) are replaced by
// canonical_no_core() so the built instance always has feasible solutions;
// the flag records the substitution.
ReductionOutput build_reduction(const ThreeDmInstance& tdm, int u);

struct CountCheckReport {
  bool ok = true;
  std::vector<std::string> mismatches;
  std::vector<std::int64_t> per_layer_totals;
  std::int64_t bound = 0;  // u * (3q + 6p^(u+1))
};

// Recomputes every sub-block cardinality, the per-layer node totals, and the
// polynomial size bound from the output's own parameters; any deviation is
// reported.
CountCheckReport count_check(const ReductionOutput& out);

struct ThreeDmResult {
  bool yes = false;
  std::vector<int> witness;  // triple indices covering every element once
};

// Exhaustive search, exact; guards q <= 8.
ThreeDmResult solve_3dm_bruteforce(const ThreeDmInstance& tdm);

struct GapVerdict {
  bool yes = false;               // 3DM answer
  std::int64_t expected = 0;      // 1 when YES, u+1 when NO
  std::int64_t objective = 0;     // measured on the built instance
  bool conclusive = false;        // solver proved optimality
  bool gap_holds = false;         // conclusive and objective == expected
  Status solver_status = Status::Infeasible;
  bool used_canonical_no_core = false;
};

// Builds the reduction, solves it exactly (branch and bound, or the tiny
// brute-force solver), and compares the objective against the promised gap
// value. A solver timeout yields an inconclusive verdict, never a false one.
GapVerdict verify_gap(const ThreeDmInstance& tdm, int u, bool use_brute_force,
                      double time_limit_seconds);

// Writes the instance in the standard file format plus a sidecar
// "<path>.meta.json" carrying NodeMeta for every node (1-based in the file).
void write_reduction(const ReductionOutput& out, const std::string& path);

}  // namespace mba
