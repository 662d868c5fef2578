#pragma once

#include <vector>

#include "mba/common.hpp"
#include "mba/instance.hpp"

namespace mba {

// Layer-by-layer construction: tuple k starts at element k of layer 1; each
// following layer is attached by a bottleneck assignment on the accumulated
// tuple weights. Throws InfeasibleError naming the first cut with no perfect
// matching (which is exactly when the instance is infeasible).
MbaSolution greedy_standard(const MbaInstance& inst);
MbaSolution greedy_standard(const MbaInstance& inst, const WeightMatrix& wm);

// Shared step engine: builds a full assignment from an arbitrary first-layer
// permutation and per-tuple starting weights. Row k of the result is tuple
// k's element per layer, starting at first_layer[k].
std::vector<std::vector<int>> greedy_steps(const MbaInstance& inst,
                                           const WeightMatrix& wm,
                                           const std::vector<int>& first_layer,
                                           const std::vector<double>& offsets);

// Rolling-horizon greedy: at each step the next min(L+1, layers left) layers
// are solved exactly as a window problem (frontier pinned, accumulated
// weights as offsets) and only the first unfixed layer is committed. L=0 is
// greedy_standard. step_time_limit bounds each window solve; on timeout the
// window's incumbent is committed.
MbaSolution greedy_lookahead(const MbaInstance& inst, int L,
                             double step_time_limit = kInf);
MbaSolution greedy_lookahead(const MbaInstance& inst, const WeightMatrix& wm,
                             int L, double step_time_limit = kInf);

// Cut-rematching descent: for each cut j, rematches tuple prefixes to
// suffixes by bottleneck assignment on prefix+suffix weights, accepting only
// strict objective improvements; sweeps restart until a full sweep makes no
// change. Never increases the objective and is idempotent on its output.
MbaSolution post_optimize(const MbaInstance& inst, const MbaSolution& sol);
MbaSolution post_optimize(const MbaInstance& inst, const WeightMatrix& wm,
                          const MbaSolution& sol);

}  // namespace mba
