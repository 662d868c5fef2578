#include "mba/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mba/colgen.hpp"
#include "mba/exact.hpp"
#include "mba/greedy.hpp"
#include "mba/instance.hpp"

namespace mba {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int lookahead_of(Method m) {
  switch (m) {
    case Method::Gp1:
    case Method::Cg1: return 1;
    case Method::Gp2:
    case Method::Cg2: return 2;
    case Method::Gp3:
    case Method::Cg3: return 3;
    default: return 0;
  }
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Feasible: return "feasible";
    case Status::TimeLimit: return "time_limit";
    case Status::Infeasible: return "infeasible";
  }
  return "?";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Lookahead pass with the greedy baseline as a fallback, so the result never
// exceeds it.
MbaSolution lookahead_pass(const MbaInstance& inst, int L, double budget,
                           const MbaSolution& base, std::int64_t base_obj) {
  const double slice = std::max(0.05, budget / std::max(1, inst.m - 1));
  MbaSolution sol = post_optimize(inst, greedy_lookahead(inst, L, slice));
  return objective(inst, sol) <= base_obj ? sol : base;
}

RunRecord run_one(const RunConfig& cfg, std::uint64_t seed) {
  RunRecord rec;
  rec.n = cfg.n;
  rec.m = cfg.m;
  rec.d = cfg.d;
  rec.seed = seed;
  rec.method = cfg.method;
  try {
    MbaInstance inst =
        generate_random(cfg.n, cfg.m, cfg.d, seed, cfg.max_weight);
    const auto t_base = Clock::now();
    MbaSolution base = greedy_standard(inst);
    const double base_seconds = seconds_since(t_base);
    const std::int64_t base_obj = objective(inst, base);
    rec.greedy_objective = base_obj;
    const double T = cfg.time_limit_seconds;

    switch (cfg.method) {
      case Method::Greedy: {
        rec.objective = base_obj;
        rec.status = "feasible";
        rec.runtime_s = base_seconds;
        break;
      }
      case Method::Gp1:
      case Method::Gp2:
      case Method::Gp3: {
        const auto t0 = Clock::now();
        MbaSolution sol =
            lookahead_pass(inst, lookahead_of(cfg.method), T, base, base_obj);
        rec.objective = objective(inst, sol);
        rec.status = "feasible";
        rec.runtime_s = seconds_since(t0);
        break;
      }
      case Method::Exact: {
        ExactResult r = solve_exact(inst, T, &base);
        rec.objective = r.report.objective;
        rec.status = status_name(r.report.status);
        rec.runtime_s = r.report.runtime_seconds;
        break;
      }
      case Method::Cg1:
      case Method::Cg2:
      case Method::Cg3: {
        const int L = lookahead_of(cfg.method);
        const auto t0 = Clock::now();
        MbaSolution sol = lookahead_pass(inst, L, 0.5 * T, base, base_obj);
        const double seed_seconds = seconds_since(t0);
        ColgenResult cg = colgen_solve(
            inst, std::max(1.0, T - seed_seconds), L, &sol);
        rec.objective = cg.report.objective;
        rec.status = status_name(cg.report.status);
        rec.runtime_s = seconds_since(t0);
        rec.cg_pre_s = seed_seconds + cg.stats.pre_seconds;
        rec.cg_master_s = cg.stats.master_seconds;
        rec.columns_generated = cg.stats.columns_generated;
        break;
      }
      case Method::Brute: {
        ExactResult r = brute_force(inst);
        rec.objective = r.report.objective;
        rec.status = status_name(r.report.status);
        rec.runtime_s = r.report.runtime_seconds;
        break;
      }
    }
    if (rec.objective > 0)
      rec.improvement_pct =
          100.0 * (static_cast<double>(base_obj) / rec.objective - 1.0);
  } catch (const std::exception& e) {
    rec.status = "error";
    log_info(std::string("bench: seed ") + std::to_string(seed) +
             " failed: " + e.what());
  }
  return rec;
}

void check_config(const RunConfig& cfg) {
  if (cfg.n <= 0 || cfg.m <= 0) throw Error("bench: n and m must be positive");
  if (cfg.d < 0) throw Error("bench: d must be nonnegative");
  if (cfg.seeds.empty()) throw Error("bench: no seeds given");
  if (cfg.time_limit_seconds <= 0) throw Error("bench: time limit must be positive");
  if (cfg.threads <= 0) throw Error("bench: threads must be positive");
}

RunConfig parse_run(const nlohmann::json& j) {
  RunConfig c;
  c.method = method_from_string(j.at("method").get<std::string>());
  c.n = j.at("n").get<int>();
  c.m = j.at("m").get<int>();
  c.d = j.at("d").get<double>();
  for (const auto& s : j.at("seeds")) c.seeds.push_back(s.get<std::uint64_t>());
  c.time_limit_seconds = j.value("time_limit_seconds", 300.0);
  c.max_weight = j.value("max_weight", 100);
  c.threads = j.value("threads", 1);
  c.out = j.value("out", std::string());
  check_config(c);
  return c;
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "greedy") return Method::Greedy;
  if (name == "gp1") return Method::Gp1;
  if (name == "gp2") return Method::Gp2;
  if (name == "gp3") return Method::Gp3;
  if (name == "exact") return Method::Exact;
  if (name == "cg1") return Method::Cg1;
  if (name == "cg2") return Method::Cg2;
  if (name == "cg3") return Method::Cg3;
  if (name == "brute") return Method::Brute;
  throw Error("unknown method '" + name + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Greedy: return "greedy";
    case Method::Gp1: return "gp1";
    case Method::Gp2: return "gp2";
    case Method::Gp3: return "gp3";
    case Method::Exact: return "exact";
    case Method::Cg1: return "cg1";
    case Method::Cg2: return "cg2";
    case Method::Cg3: return "cg3";
    case Method::Brute: return "brute";
  }
  return "?";
}

std::vector<RunRecord> run_benchmark(const RunConfig& cfg) {
  check_config(cfg);
  std::vector<RunRecord> out(cfg.seeds.size());
  if (cfg.threads == 1 || cfg.seeds.size() == 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
      out[i] = run_one(cfg, cfg.seeds[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      out[i] = run_one(cfg, cfg.seeds[i]);
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<int>(cfg.threads, static_cast<int>(cfg.seeds.size()));
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "# mba-bench-csv-v1\n"
     << "# improvement_pct = 100*(greedy_objective/objective - 1)\n"
     << "n,m,d,seed,method,objective,greedy_objective,improvement_pct,status,"
        "runtime_s,cg_pre_s,cg_master_s,columns_generated\n";
  for (const RunRecord& r : records)
    os << r.n << ',' << r.m << ',' << fmt(r.d) << ',' << r.seed << ','
       << method_name(r.method) << ',' << r.objective << ','
       << r.greedy_objective << ',' << fmt(r.improvement_pct) << ','
       << r.status << ',' << fmt(r.runtime_s) << ',' << fmt(r.cg_pre_s) << ','
       << fmt(r.cg_master_s) << ',' << r.columns_generated << '\n';

  // one mean row per (method, n, m, d) group, first-appearance order
  std::vector<std::tuple<Method, int, int, double>> groups;
  for (const RunRecord& r : records) {
    std::tuple<Method, int, int, double> key{r.method, r.n, r.m, r.d};
    if (std::find(groups.begin(), groups.end(), key) == groups.end())
      groups.push_back(key);
  }
  for (const auto& key : groups) {
    double cnt = 0, obj = 0, gobj = 0, imp = 0, rt = 0, pre = 0, mas = 0,
           cols = 0;
    for (const RunRecord& r : records) {
      if (std::tuple<Method, int, int, double>{r.method, r.n, r.m, r.d} != key)
        continue;
      cnt += 1;
      obj += static_cast<double>(r.objective);
      gobj += static_cast<double>(r.greedy_objective);
      imp += r.improvement_pct;
      rt += r.runtime_s;
      pre += r.cg_pre_s;
      mas += r.cg_master_s;
      cols += static_cast<double>(r.columns_generated);
    }
    os << std::get<1>(key) << ',' << std::get<2>(key) << ','
       << fmt(std::get<3>(key)) << ",mean," << method_name(std::get<0>(key))
       << ',' << fmt(obj / cnt) << ',' << fmt(gobj / cnt) << ','
       << fmt(imp / cnt) << ",-," << fmt(rt / cnt) << ',' << fmt(pre / cnt)
       << ',' << fmt(mas / cnt) << ',' << fmt(cols / cnt) << '\n';
  }
  return os.str();
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << to_csv(records);
  if (!f) throw Error("write failed: " + path);
}

std::vector<RunConfig> read_bench_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bench config: " + std::string(e.what()));
  }
  try {
    std::vector<RunConfig> runs;
    if (j.contains("runs"))
      for (const auto& r : j.at("runs")) runs.push_back(parse_run(r));
    else
      runs.push_back(parse_run(j));
    return runs;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bench config: " + std::string(e.what()));
  }
}

}  // namespace mba
