#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mba/common.hpp"

namespace mba {

// A multi-level bottleneck assignment instance: m layers of n weighted
// elements, with an arc set between consecutive layers. A solution partitions
// the elements into n tuples, one element per layer, consecutive elements
// joined by arcs; its value is the largest tuple weight sum.
struct MbaInstance {
  int n = 0;
  int m = 0;
  // weights[i][j]: weight of element i in layer j (nonnegative integers).
  std::vector<std::vector<std::int64_t>> weights;
  // arcs[j]: sorted unique (i, i') pairs from layer j to layer j+1; size m-1.
  std::vector<std::vector<std::pair<int, int>>> arcs;

  // Derived per-cut adjacency (size m-1), rebuilt by rebuild_adjacency().
  // succ[j][i]: layer-(j+1) successors of element i in layer j.
  // pred[j][b]: layer-j predecessors of element b in layer j+1.
  std::vector<std::vector<std::vector<int>>> succ;
  std::vector<std::vector<std::vector<int>>> pred;

  void rebuild_adjacency();
};

struct MbaSolution {
  // assign[k][j]: element of layer j owned by tuple k.
  std::vector<std::vector<int>> assign;
};

// Structural checks; returns human-readable violations, empty when valid.
std::vector<std::string> validate(const MbaInstance& inst);

// Throws ValidationError with the first violation.
void require_valid(const MbaInstance& inst);

// Throws InfeasibleError naming the first violated constraint (shape,
// per-layer permutation, missing arc).
void check_solution(const MbaInstance& inst, const MbaSolution& sol);

// Max tuple weight of a feasible solution; checks feasibility first.
std::int64_t objective(const MbaInstance& inst, const MbaSolution& sol);

// Same, over an arbitrary weight matrix (no integrality assumption).
double objective_weighted(const MbaInstance& inst, const WeightMatrix& w,
                          const MbaSolution& sol);

WeightMatrix to_weight_matrix(const MbaInstance& inst);

// Random instance: weights uniform on {1..max_weight}; every horizontal arc
// (i, i) plus the arcs of floor(d*n) random layer-by-layer walks (duplicates
// dropped). Identical parameters yield bit-identical instances; see Rng.
MbaInstance generate_random(int n, int m, double d, std::uint64_t seed,
                            int max_weight = 100);

// Structured-text (JSON) instance files, format tag "mba-v1", 1-based indices.
void write_instance(const MbaInstance& inst, const std::string& path);
MbaInstance read_instance(const std::string& path);
std::string instance_to_string(const MbaInstance& inst);
MbaInstance instance_from_string(const std::string& text);

// Solution files: tuple rows plus the objective, same format tag.
void write_solution(const MbaSolution& sol, std::int64_t objective_value,
                    const std::string& path);
struct SolutionFile {
  MbaSolution solution;
  std::int64_t objective = 0;
};
SolutionFile read_solution(const std::string& path);

}  // namespace mba
