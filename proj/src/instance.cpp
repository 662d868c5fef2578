#include "mba/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mba/rng.hpp"

namespace mba {

void MbaInstance::rebuild_adjacency() {
  succ.assign(m > 0 ? m - 1 : 0, {});
  pred.assign(m > 0 ? m - 1 : 0, {});
  for (int j = 0; j + 1 < m; ++j) {
    succ[j].assign(n, {});
    pred[j].assign(n, {});
    for (auto [a, b] : arcs[j]) {
      succ[j][a].push_back(b);
      pred[j][b].push_back(a);
    }
  }
}

std::vector<std::string> validate(const MbaInstance& inst) {
  std::vector<std::string> out;
  auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (inst.n < 1) fail("n must be >= 1");
  if (inst.m < 1) fail("m must be >= 1");
  if (!out.empty()) return out;

  if (static_cast<int>(inst.weights.size()) != inst.n) {
    fail("weights must have n rows");
    return out;
  }
  for (int i = 0; i < inst.n; ++i) {
    if (static_cast<int>(inst.weights[i].size()) != inst.m) {
      fail("weights row " + std::to_string(i + 1) + " must have m entries");
      return out;
    }
    for (int j = 0; j < inst.m; ++j)
      if (inst.weights[i][j] < 0)
        fail("negative weight at element " + std::to_string(i + 1) + ", layer " +
             std::to_string(j + 1));
  }

  if (static_cast<int>(inst.arcs.size()) != inst.m - 1) {
    fail("arcs must have m-1 layers");
    return out;
  }
  for (int j = 0; j + 1 < inst.m; ++j) {
    const auto& layer = inst.arcs[j];
    for (auto [a, b] : layer) {
      if (a < 0 || a >= inst.n || b < 0 || b >= inst.n) {
        fail("arc endpoint out of range in layer " + std::to_string(j + 1));
        return out;
      }
    }
    if (!std::is_sorted(layer.begin(), layer.end()))
      fail("arc list of layer " + std::to_string(j + 1) + " is not sorted");
    for (std::size_t t = 1; t < layer.size(); ++t)
      if (layer[t] == layer[t - 1])
        fail("duplicate arc (" + std::to_string(layer[t].first + 1) + ", " +
             std::to_string(layer[t].second + 1) + ") in layer " + std::to_string(j + 1));
  }
  return out;
}

void require_valid(const MbaInstance& inst) {
  auto issues = validate(inst);
  if (!issues.empty()) throw ValidationError(issues.front());
}

void check_solution(const MbaInstance& inst, const MbaSolution& sol) {
  if (static_cast<int>(sol.assign.size()) != inst.n)
    throw InfeasibleError("solution must have n tuples");
  std::vector<char> seen;
  for (int j = 0; j < inst.m; ++j) {
    seen.assign(inst.n, 0);
    for (int k = 0; k < inst.n; ++k) {
      if (static_cast<int>(sol.assign[k].size()) != inst.m)
        throw InfeasibleError("tuple " + std::to_string(k + 1) + " must have m entries");
      int e = sol.assign[k][j];
      if (e < 0 || e >= inst.n)
        throw InfeasibleError("tuple " + std::to_string(k + 1) + ", layer " +
                              std::to_string(j + 1) + ": element out of range");
      if (seen[e])
        throw InfeasibleError("layer " + std::to_string(j + 1) + ": element " +
                              std::to_string(e + 1) + " used by two tuples");
      seen[e] = 1;
    }
  }
  for (int k = 0; k < inst.n; ++k)
    for (int j = 0; j + 1 < inst.m; ++j) {
      std::pair<int, int> arc{sol.assign[k][j], sol.assign[k][j + 1]};
      if (!std::binary_search(inst.arcs[j].begin(), inst.arcs[j].end(), arc))
        throw InfeasibleError("tuple " + std::to_string(k + 1) + ": no arc (" +
                              std::to_string(arc.first + 1) + ", " +
                              std::to_string(arc.second + 1) + ") in layer " +
                              std::to_string(j + 1));
    }
}

std::int64_t objective(const MbaInstance& inst, const MbaSolution& sol) {
  check_solution(inst, sol);
  std::int64_t best = 0;
  for (int k = 0; k < inst.n; ++k) {
    std::int64_t sum = 0;
    for (int j = 0; j < inst.m; ++j) sum += inst.weights[sol.assign[k][j]][j];
    best = std::max(best, sum);
  }
  return best;
}

double objective_weighted(const MbaInstance& inst, const WeightMatrix& w,
                          const MbaSolution& sol) {
  check_solution(inst, sol);
  double best = -kInf;
  for (int k = 0; k < inst.n; ++k) {
    double sum = 0;
    for (int j = 0; j < inst.m; ++j) sum += w[sol.assign[k][j]][j];
    best = std::max(best, sum);
  }
  return best;
}

WeightMatrix to_weight_matrix(const MbaInstance& inst) {
  WeightMatrix w(inst.n, std::vector<double>(inst.m));
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.m; ++j) w[i][j] = static_cast<double>(inst.weights[i][j]);
  return w;
}

MbaInstance generate_random(int n, int m, double d, std::uint64_t seed, int max_weight) {
  if (n < 1 || m < 1) throw ValidationError("generate_random: n and m must be >= 1");
  if (d < 0) throw ValidationError("generate_random: d must be >= 0");
  if (max_weight < 1) throw ValidationError("generate_random: max_weight must be >= 1");

  Rng rng(seed);
  MbaInstance inst;
  inst.n = n;
  inst.m = m;
  inst.weights.assign(n, std::vector<std::int64_t>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) inst.weights[i][j] = rng.uniform_1_to(max_weight);

  std::vector<std::set<std::pair<int, int>>> arcs(m > 1 ? m - 1 : 0);
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i < n; ++i) arcs[j].insert({i, i});

  auto walks = static_cast<std::int64_t>(std::floor(d * static_cast<double>(n)));
  for (std::int64_t t = 0; t < walks; ++t) {
    int prev = static_cast<int>(rng.next_below(n));
    for (int j = 1; j < m; ++j) {
      int cur = static_cast<int>(rng.next_below(n));
      arcs[j - 1].insert({prev, cur});
      prev = cur;
    }
  }

  inst.arcs.reserve(arcs.size());
  for (auto& layer : arcs)
    inst.arcs.emplace_back(layer.begin(), layer.end());
  inst.rebuild_adjacency();
  return inst;
}

namespace {

using Json = nlohmann::ordered_json;

Json instance_to_json(const MbaInstance& inst) {
  Json doc;
  doc["format"] = "mba-v1";
  doc["n"] = inst.n;
  doc["m"] = inst.m;
  doc["weights"] = inst.weights;
  Json arcs = Json::array();
  for (const auto& layer : inst.arcs) {
    Json l = Json::array();
    for (auto [a, b] : layer) l.push_back(Json::array({a + 1, b + 1}));
    arcs.push_back(std::move(l));
  }
  doc["arcs"] = std::move(arcs);
  return doc;
}

MbaInstance instance_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  if (!doc.contains("format") || doc["format"] != "mba-v1")
    throw ParseError("missing or unsupported format tag (expected \"mba-v1\")");
  for (const char* key : {"n", "m", "weights", "arcs"})
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");

  MbaInstance inst;
  inst.n = doc["n"].get<int>();
  inst.m = doc["m"].get<int>();
  inst.weights = doc["weights"].get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& layer : doc["arcs"]) {
    std::vector<std::pair<int, int>> l;
    for (const auto& arc : layer) {
      if (!arc.is_array() || arc.size() != 2) throw ParseError("arc must be a pair");
      l.emplace_back(arc[0].get<int>() - 1, arc[1].get<int>() - 1);
    }
    inst.arcs.push_back(std::move(l));
  }

  auto issues = validate(inst);
  if (!issues.empty()) throw ValidationError(issues.front());
  inst.rebuild_adjacency();
  return inst;
}

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return doc;
}

}  // namespace

std::string instance_to_string(const MbaInstance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

MbaInstance instance_from_string(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const MbaInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << instance_to_string(inst);
}

MbaInstance read_instance(const std::string& path) {
  return instance_from_json(parse_file(path));
}

void write_solution(const MbaSolution& sol, std::int64_t objective_value,
                    const std::string& path) {
  Json doc;
  doc["format"] = "mba-v1";
  Json rows = Json::array();
  for (const auto& tuple : sol.assign) {
    Json row = Json::array();
    for (int e : tuple) row.push_back(e + 1);
    rows.push_back(std::move(row));
  }
  doc["assign"] = std::move(rows);
  doc["objective"] = objective_value;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

SolutionFile read_solution(const std::string& path) {
  Json doc = parse_file(path);
  if (!doc.contains("format") || doc["format"] != "mba-v1")
    throw ParseError("missing or unsupported format tag (expected \"mba-v1\")");
  if (!doc.contains("assign") || !doc.contains("objective"))
    throw ParseError("solution file needs \"assign\" and \"objective\"");
  SolutionFile f;
  for (const auto& row : doc["assign"]) {
    std::vector<int> tuple;
    for (const auto& e : row) tuple.push_back(e.get<int>() - 1);
    f.solution.assign.push_back(std::move(tuple));
  }
  f.objective = doc["objective"].get<std::int64_t>();
  return f;
}

}  // namespace mba
