#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mba/bench.hpp"
#include "mba/exact.hpp"
#include "mba/instance.hpp"

using namespace mba;

namespace {

struct CsvRow {
  std::vector<std::string> cells;
  const std::string& operator[](int i) const { return cells[i]; }
};

struct Csv {
  std::vector<std::string> comments;
  std::string header;
  std::vector<CsvRow> rows;   // seed rows
  std::vector<CsvRow> means;  // aggregate rows
};

Csv parse_csv(const std::string& text) {
  Csv out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.comments.push_back(line);
      continue;
    }
    if (out.header.empty()) {
      out.header = line;
      continue;
    }
    CsvRow row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.cells.push_back(cell);
    REQUIRE(row.cells.size() == 13);
    (row[3] == "mean" ? out.means : out.rows).push_back(std::move(row));
  }
  return out;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("method names roundtrip") {
  for (Method m : {Method::Greedy, Method::Gp1, Method::Gp2, Method::Gp3,
                   Method::Exact, Method::Cg1, Method::Cg2, Method::Cg3,
                   Method::Brute})
    CHECK(method_from_string(method_name(m)) == m);
  CHECK_THROWS_AS(method_from_string("gp4"), Error);
}

TEST_CASE("greedy benchmarks itself with zero improvement") {
  RunConfig cfg;
  cfg.method = Method::Greedy;
  cfg.n = 6;
  cfg.m = 3;
  cfg.d = 1.5;
  cfg.seeds = {1, 2, 3, 4, 5};
  auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 5);
  for (const RunRecord& r : records) {
    CHECK(r.objective == r.greedy_objective);
    CHECK(r.improvement_pct == 0.0);
    CHECK(r.status == "feasible");
    CHECK(r.seed >= 1);
  }
}

TEST_CASE("exact runs are optimal and verified against brute force") {
  RunConfig cfg;
  cfg.method = Method::Exact;
  cfg.n = 4;
  cfg.m = 3;
  cfg.d = 1.8;
  for (std::uint64_t s = 1; s <= 50; ++s) cfg.seeds.push_back(s);
  auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 50);
  for (const RunRecord& r : records) {
    CHECK(r.status == "optimal");
    CHECK(r.objective <= r.greedy_objective);
    ExactResult oracle =
        brute_force(generate_random(cfg.n, cfg.m, cfg.d, r.seed));
    CHECK(r.objective == oracle.report.objective);
  }
}

TEST_CASE("repeated runs produce identical objective columns") {
  RunConfig cfg;
  cfg.method = Method::Gp2;
  cfg.n = 8;
  cfg.m = 4;
  cfg.d = 2.0;
  cfg.seeds = {10, 11, 12, 13};
  cfg.time_limit_seconds = 1.0;
  auto a = run_benchmark(cfg);
  auto b = run_benchmark(cfg);
  cfg.threads = 3;
  auto c = run_benchmark(cfg);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].objective == b[i].objective);
    CHECK(a[i].objective == c[i].objective);
    CHECK(a[i].seed == c[i].seed);
    CHECK(a[i].objective <= a[i].greedy_objective);
  }
}

TEST_CASE("column generation records stay within the greedy baseline") {
  RunConfig cfg;
  cfg.method = Method::Cg1;
  cfg.n = 8;
  cfg.m = 4;
  cfg.d = 1.8;
  cfg.seeds = {21, 22, 23};
  cfg.time_limit_seconds = 2.0;
  auto records = run_benchmark(cfg);
  for (const RunRecord& r : records) {
    CHECK(r.status == "feasible");
    CHECK(r.objective <= r.greedy_objective);
    CHECK(r.columns_generated >= cfg.n);
    CHECK(r.cg_pre_s >= 0.0);
    CHECK(r.cg_master_s >= 0.0);
    CHECK(r.improvement_pct >= 0.0);
  }
}

TEST_CASE("per-seed failures are recorded and the run continues") {
  RunConfig cfg;
  cfg.method = Method::Brute;  // refuses n = 8
  cfg.n = 8;
  cfg.m = 3;
  cfg.d = 1.0;
  cfg.seeds = {1, 2, 3};
  auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 3);
  for (const RunRecord& r : records) {
    CHECK(r.status == "error");
    CHECK(r.objective == 0);
    CHECK(r.improvement_pct == 0.0);
  }
}

TEST_CASE("csv schema, rows and aggregate means") {
  RunConfig cfg;
  cfg.method = Method::Exact;
  cfg.n = 4;
  cfg.m = 3;
  cfg.d = 1.5;
  cfg.seeds = {5, 6, 7, 8};
  auto records = run_benchmark(cfg);
  Csv csv = parse_csv(to_csv(records));

  REQUIRE_FALSE(csv.comments.empty());
  CHECK(csv.comments[0] == "# mba-bench-csv-v1");
  CHECK(csv.header ==
        "n,m,d,seed,method,objective,greedy_objective,improvement_pct,status,"
        "runtime_s,cg_pre_s,cg_master_s,columns_generated");
  REQUIRE(csv.rows.size() == 4);
  REQUIRE(csv.means.size() == 1);

  double obj_sum = 0.0, imp_sum = 0.0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const CsvRow& row = csv.rows[i];
    CHECK(row[0] == "4");
    CHECK(row[1] == "3");
    CHECK(row[4] == "exact");
    CHECK(row[3] == std::to_string(records[i].seed));
    CHECK(std::stoll(row[5]) == records[i].objective);
    obj_sum += (double)records[i].objective;
    imp_sum += records[i].improvement_pct;
  }
  const CsvRow& mean = csv.means[0];
  CHECK(mean[3] == "mean");
  CHECK(mean[8] == "-");
  CHECK(std::stod(mean[5]) == doctest::Approx(obj_sum / 4).epsilon(1e-9));
  CHECK(std::stod(mean[7]) == doctest::Approx(imp_sum / 4).epsilon(1e-9));
}

TEST_CASE("csv files are written verbatim") {
  RunConfig cfg;
  cfg.method = Method::Greedy;
  cfg.n = 4;
  cfg.m = 3;
  cfg.d = 1.0;
  cfg.seeds = {1, 2};
  auto records = run_benchmark(cfg);
  const std::string path = temp_path("mba_test_bench.csv");
  write_csv(records, path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == to_csv(records));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_csv(records, "/nonexistent/dir/x.csv"), Error);
}

TEST_CASE("grouped records aggregate separately") {
  RunConfig a;
  a.method = Method::Greedy;
  a.n = 4;
  a.m = 3;
  a.d = 1.0;
  a.seeds = {1, 2};
  RunConfig b = a;
  b.n = 5;
  auto records = run_benchmark(a);
  for (auto& r : run_benchmark(b)) records.push_back(r);
  Csv csv = parse_csv(to_csv(records));
  CHECK(csv.rows.size() == 4);
  CHECK(csv.means.size() == 2);
  CHECK(csv.means[0][0] == "4");
  CHECK(csv.means[1][0] == "5");
}

TEST_CASE("config files in both shapes") {
  const std::string path = temp_path("mba_test_bench_cfg.json");
  std::ofstream(path) << R"({"runs":[
    {"method":"greedy","n":4,"m":3,"d":1.0,"seeds":[1,2]},
    {"method":"gp2","n":5,"m":3,"d":1.5,"seeds":[3],"time_limit_seconds":7.5,
     "max_weight":50,"threads":2,"out":"x.csv"}]})";
  auto runs = read_bench_config(path);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].method == Method::Greedy);
  CHECK(runs[0].time_limit_seconds == 300.0);
  CHECK(runs[0].seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(runs[1].method == Method::Gp2);
  CHECK(runs[1].time_limit_seconds == 7.5);
  CHECK(runs[1].max_weight == 50);
  CHECK(runs[1].threads == 2);
  CHECK(runs[1].out == "x.csv");

  std::ofstream(path) << R"({"method":"exact","n":4,"m":3,"d":2.0,"seeds":[9]})";
  auto single = read_bench_config(path);
  REQUIRE(single.size() == 1);
  CHECK(single[0].method == Method::Exact);

  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(read_bench_config(path), ParseError);
  std::ofstream(path) << R"({"method":"exact","n":4,"m":3,"d":2.0})";
  CHECK_THROWS_AS(read_bench_config(path), ParseError);
  std::ofstream(path) << R"({"method":"exact","n":0,"m":3,"d":2.0,"seeds":[1]})";
  CHECK_THROWS_AS(read_bench_config(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_bench_config("/nonexistent/cfg.json"), Error);
}

TEST_CASE("benchmark rejects bad configs") {
  RunConfig cfg;
  cfg.method = Method::Greedy;
  cfg.n = 4;
  cfg.m = 3;
  cfg.d = 1.0;
  CHECK_THROWS_AS(run_benchmark(cfg), Error);  // no seeds
  cfg.seeds = {1};
  cfg.time_limit_seconds = 0.0;
  CHECK_THROWS_AS(run_benchmark(cfg), Error);
}
