#pragma once

#include <vector>

#include "mba/common.hpp"

namespace mba {

// Dense linear program. Variables are nonnegative unless their
// lower_bounded flag is cleared (free variables are split internally).
struct LinearProgram {
  enum class Sense { Minimize, Maximize };
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;  // one coefficient row per constraint
  std::vector<char> relations;            // '<', '=' or '>' per row
  std::vector<double> rhs;
  std::vector<char> lower_bounded;        // empty means all nonnegative

  int add_variable(double cost, bool nonneg = true);
  void add_row(const std::vector<double>& coeffs, char relation, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::int64_t iterations = 0;
};

// Two-phase revised simplex (dense explicit basis inverse), Bland's rule
// throughout, tolerance 1e-7. Phase 1 is skipped when the slack basis is
// already feasible.
LpResult lp_solve(const LinearProgram& lp);

}  // namespace mba
