#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mba/bench.hpp"
#include "mba/colgen.hpp"
#include "mba/common.hpp"
#include "mba/exact.hpp"
#include "mba/greedy.hpp"
#include "mba/instance.hpp"
#include "mba/reduction3dm.hpp"

namespace {

int do_gen(int n, int m, double d, std::uint64_t seed, int max_weight,
           const std::string& out) {
  mba::MbaInstance inst = mba::generate_random(n, m, d, seed, max_weight);
  mba::write_instance(inst, out);
  std::cout << "wrote " << out << " (n=" << inst.n << ", m=" << inst.m
            << ")\n";
  return 0;
}

int do_solve(const std::string& method_name, const std::string& path,
             double time_limit, int lookahead, const std::string& out) {
  const mba::Method method = mba::method_from_string(method_name);
  mba::MbaInstance inst = mba::read_instance(path);
  int L = lookahead;
  if (L < 0) {
    switch (method) {
      case mba::Method::Gp1:
      case mba::Method::Cg1: L = 1; break;
      case mba::Method::Gp2:
      case mba::Method::Cg2: L = 2; break;
      case mba::Method::Gp3:
      case mba::Method::Cg3: L = 3; break;
      default: L = 0; break;
    }
  }

  mba::MbaSolution sol;
  std::int64_t obj = 0;
  std::string status = "feasible";
  double runtime = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  switch (method) {
    case mba::Method::Greedy: {
      sol = mba::greedy_standard(inst);
      obj = mba::objective(inst, sol);
      runtime = elapsed();
      break;
    }
    case mba::Method::Gp1:
    case mba::Method::Gp2:
    case mba::Method::Gp3: {
      const double slice =
          std::max(0.05, time_limit / std::max(1, inst.m - 1));
      sol = mba::post_optimize(inst, mba::greedy_lookahead(inst, L, slice));
      obj = mba::objective(inst, sol);
      runtime = elapsed();
      break;
    }
    case mba::Method::Exact: {
      mba::ExactResult r = mba::solve_exact(inst, time_limit);
      sol = r.solution;
      obj = r.report.objective;
      status = mba::to_string(r.report.status);
      runtime = r.report.runtime_seconds;
      std::cout << "lower_bound " << r.report.lower_bound << "\n";
      break;
    }
    case mba::Method::Cg1:
    case mba::Method::Cg2:
    case mba::Method::Cg3: {
      mba::ColgenResult r = mba::colgen_solve(inst, time_limit, L);
      sol = r.solution;
      obj = r.report.objective;
      status = mba::to_string(r.report.status);
      runtime = r.report.runtime_seconds;
      std::cout << "lower_bound " << r.report.lower_bound << "\ncolumns "
                << r.stats.columns_generated << "\n";
      break;
    }
    case mba::Method::Brute: {
      mba::ExactResult r = mba::brute_force(inst);
      sol = r.solution;
      obj = r.report.objective;
      status = mba::to_string(r.report.status);
      runtime = r.report.runtime_seconds;
      break;
    }
  }

  std::cout << "method " << method_name << "\nobjective " << obj
            << "\nstatus " << status << "\nruntime_s " << runtime << "\n";
  if (!out.empty()) {
    mba::write_solution(sol, obj, out);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int do_bench(const std::string& config_path, const std::string& out) {
  std::vector<mba::RunRecord> all;
  for (const mba::RunConfig& cfg : mba::read_bench_config(config_path)) {
    std::vector<mba::RunRecord> rec = mba::run_benchmark(cfg);
    all.insert(all.end(), rec.begin(), rec.end());
    if (!cfg.out.empty() && cfg.out != out) mba::write_csv(rec, cfg.out);
  }
  mba::write_csv(all, out);
  std::cout << "wrote " << out << " (" << all.size() << " runs)\n";
  return 0;
}

int do_reduce(const std::string& tdm_path, int u, bool verify, bool brute,
              double time_limit, const std::string& out) {
  mba::ThreeDmInstance tdm = mba::read_3dm(tdm_path);
  mba::ReductionOutput red = mba::build_reduction(tdm, u);
  std::cout << "built instance: n=" << red.instance.n
            << ", m=" << red.instance.m
            << (red.used_canonical_no_core ? " (canonical no-core)" : "")
            << "\n";
  mba::CountCheckReport counts = mba::count_check(red);
  if (!counts.ok) {
    for (const std::string& msg : counts.mismatches)
      std::cout << "count mismatch: " << msg << "\n";
    return 1;
  }
  std::cout << "counts ok, per-layer total " << counts.per_layer_totals[0]
            << ", bound " << counts.bound << "\n";
  if (!out.empty()) {
    mba::write_reduction(red, out);
    std::cout << "wrote " << out << " and " << out << ".meta.json\n";
  }
  if (!verify) return 0;

  mba::GapVerdict v = mba::verify_gap(tdm, u, brute, time_limit);
  std::cout << "3dm answer: " << (v.yes ? "YES" : "NO") << "\nexpected "
            << v.expected << "\nmeasured " << v.objective << " ("
            << mba::to_string(v.solver_status) << ")\n";
  if (!v.conclusive) {
    std::cout << "verdict: inconclusive (solver hit the time limit)\n";
    return 0;
  }
  std::cout << "verdict: " << (v.gap_holds ? "gap holds" : "GAP MISMATCH")
            << "\n";
  return v.gap_holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-level bottleneck assignment toolkit"};
  app.require_subcommand(1);

  int n = 10, m = 5, lookahead = -1, u = 1, max_weight = 100;
  double d = 2.0, time_limit = 300.0;
  std::uint64_t seed = 1;
  std::string out, instance_path, method = "greedy", config_path, tdm_path;
  bool verify = false, brute = false;

  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--n", n, "elements per layer")->required();
  gen->add_option("--m", m, "layers")->required();
  gen->add_option("--d", d, "arc density")->required();
  gen->add_option("--seed", seed, "PRNG seed")->required();
  gen->add_option("--max-weight", max_weight, "largest weight");
  gen->add_option("--out", out, "output path")->required();

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--method", method,
                    "greedy|gp1|gp2|gp3|exact|cg1|cg2|cg3|brute")
      ->required();
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--time-limit", time_limit, "seconds");
  solve->add_option("--lookahead", lookahead,
                    "override the method's lookahead depth");
  solve->add_option("--out", out, "write the solution here");

  CLI::App* bench = app.add_subcommand("bench", "run a benchmark config");
  bench->add_option("--config", config_path, "JSON run configuration")
      ->required();
  bench->add_option("--out", out, "CSV output path")->required();

  CLI::App* red = app.add_subcommand("reduce3dm", "build the 3DM reduction");
  red->add_option("--tdm", tdm_path, "3DM input file")->required();
  red->add_option("--u", u, "layer-triple count")->required();
  red->add_flag("--verify", verify, "solve and check the promised gap");
  red->add_flag("--brute", brute, "verify with the brute-force solver");
  red->add_option("--time-limit", time_limit, "verification budget, seconds");
  red->add_option("--out", out, "write the built instance here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return do_gen(n, m, d, seed, max_weight, out);
    if (solve->parsed())
      return do_solve(method, instance_path, time_limit, lookahead, out);
    if (bench->parsed()) return do_bench(config_path, out);
    if (red->parsed())
      return do_reduce(tdm_path, u, verify, brute, time_limit, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
