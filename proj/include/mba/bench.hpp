#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mba/common.hpp"

namespace mba {

enum class Method { Greedy, Gp1, Gp2, Gp3, Exact, Cg1, Cg2, Cg3, Brute };

Method method_from_string(const std::string& name);
const char* method_name(Method m);

struct RunConfig {
  Method method = Method::Greedy;
  int n = 0;
  int m = 0;
  double d = 0.0;
  std::vector<std::uint64_t> seeds;
  double time_limit_seconds = 300.0;
  int max_weight = 100;
  int threads = 1;  // harness-level parallelism across seeds, solvers stay
                    // single-threaded
  std::string out;  // CSV path; empty when the caller writes the file
};

struct RunRecord {
  int n = 0;
  int m = 0;
  double d = 0.0;
  std::uint64_t seed = 0;
  Method method = Method::Greedy;
  std::int64_t objective = 0;
  std::int64_t greedy_objective = 0;
  double improvement_pct = 0.0;  // 100 * (greedy_objective / objective - 1)
  std::string status;  // optimal | feasible | time_limit | infeasible | error
  double runtime_s = 0.0;
  double cg_pre_s = 0.0;     // column generation: seed + pricing phase
  double cg_master_s = 0.0;  // column generation: final integral master
  std::int64_t columns_generated = 0;
};

// One record per seed, in the order given. Every run also solves the plain
// greedy baseline; the configured method gets that solution as a warm start
// (exact) or never returns anything worse than it (lookahead and column
// generation), so objective <= greedy_objective holds on every record.
// A per-instance solver failure is recorded as status "error" and the run
// continues.
std::vector<RunRecord> run_benchmark(const RunConfig& cfg);

// Versioned CSV ("mba-bench-csv-v1"): a comment header documenting the
// improvement formula, one row per record, and one aggregate row per
// (method, n, m, d) group carrying column means, seed column "mean".
std::string to_csv(const std::vector<RunRecord>& records);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

// JSON config: either {"runs": [ ... ]} or a single run object with fields
// method, n, m, d, seeds and optional time_limit_seconds, max_weight,
// threads, out.
std::vector<RunConfig> read_bench_config(const std::string& path);

}  // namespace mba
