#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mba {

// Weight matrix indexed [element][layer]. Solvers run on doubles so the same
// search code serves integer instances and the re-weighted (possibly negative)
// pricing subproblems.
using WeightMatrix = std::vector<std::vector<double>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Optimal, Feasible, TimeLimit, Infeasible };

const char* to_string(Status s);

// Outcome summary shared by every solver entry point.
struct SolveReport {
  Status status = Status::Infeasible;
  std::int64_t objective = 0;   // meaningful unless status == Infeasible
  double lower_bound = 0.0;
  double runtime_seconds = 0.0;
  std::uint64_t node_or_iteration_count = 0;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file or document.
struct ParseError : Error {
  using Error::Error;
};

// A structurally invalid instance/solution (duplicate arcs, bad indices, ...).
struct ValidationError : Error {
  using Error::Error;
};

// A requested object does not exist (no perfect matching, unmet precondition).
struct InfeasibleError : Error {
  using Error::Error;
};

// Logging controlled by the MBA_LOG environment variable: unset/empty or "0"
// is silent, "1"/"info" prints progress lines, "2"/"debug" is chatty.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace mba
