#include "mba/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mba {

namespace {
constexpr double kTol = 1e-7;       // feasibility / optimality
constexpr double kPivotTol = 1e-9;  // smallest usable pivot
}  // namespace

int LinearProgram::add_variable(double cost, bool nonneg) {
  if (!nonneg && lower_bounded.empty())
    lower_bounded.assign(objective.size(), 1);  // backfill earlier variables
  objective.push_back(cost);
  if (!nonneg || !lower_bounded.empty()) lower_bounded.push_back(nonneg ? 1 : 0);
  for (auto& r : rows) r.push_back(0.0);
  return (int)objective.size() - 1;
}

void LinearProgram::add_row(const std::vector<double>& coeffs, char relation,
                            double b) {
  if (coeffs.size() != objective.size())
    throw Error("lp: row length does not match variable count");
  if (relation != '<' && relation != '=' && relation != '>')
    throw Error("lp: unknown relation");
  rows.push_back(coeffs);
  relations.push_back(relation);
  rhs.push_back(b);
}

namespace {

// Working form: min c'x, Ax = b with b >= 0, x >= 0. Free variables are
// split x = p - q; '<' rows gain a slack, '>' rows a surplus; rows with
// negative right-hand side are negated. Rows whose slack cannot serve as
// the initial basic variable receive an artificial.
struct Standardized {
  int art_begin = 0;  // first artificial column
  int total = 0;
  std::vector<std::vector<double>> col;
  std::vector<double> c;
  std::vector<double> b;
  std::vector<int> basis;                 // basic column per row
  std::vector<std::pair<int, int>> back;  // original var -> (plus, minus)
};

Standardized standardize(const LinearProgram& lp) {
  const int nv = (int)lp.objective.size();
  const int nr = (int)lp.rows.size();
  if ((int)lp.relations.size() != nr || (int)lp.rhs.size() != nr)
    throw Error("lp: inconsistent row metadata");
  for (const auto& r : lp.rows)
    if ((int)r.size() != nv) throw Error("lp: ragged constraint matrix");
  if (!lp.lower_bounded.empty() && (int)lp.lower_bounded.size() != nv)
    throw Error("lp: lower_bounded size mismatch");

  const double sign = lp.sense == LinearProgram::Sense::Maximize ? -1.0 : 1.0;
  Standardized s;
  s.back.assign(nv, {-1, -1});
  for (int j = 0; j < nv; ++j) {
    bool nonneg = lp.lower_bounded.empty() || lp.lower_bounded[j];
    s.back[j].first = (int)s.c.size();
    s.c.push_back(sign * lp.objective[j]);
    if (!nonneg) {
      s.back[j].second = (int)s.c.size();
      s.c.push_back(-sign * lp.objective[j]);
    }
  }
  std::vector<double> flip(nr, 1.0);
  for (int i = 0; i < nr; ++i)
    if (lp.rhs[i] < 0) flip[i] = -1.0;
  std::vector<int> slack_of(nr, -1);
  for (int i = 0; i < nr; ++i) {
    if (lp.relations[i] == '=') continue;
    slack_of[i] = (int)s.c.size();
    s.c.push_back(0.0);
  }
  s.art_begin = (int)s.c.size();
  s.b.assign(nr, 0.0);
  for (int i = 0; i < nr; ++i) s.b[i] = flip[i] * lp.rhs[i];

  s.col.assign(s.c.size(), std::vector<double>(nr, 0.0));
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nv; ++j) {
      double v = flip[i] * lp.rows[i][j];
      if (v == 0.0) continue;
      s.col[s.back[j].first][i] = v;
      if (s.back[j].second >= 0) s.col[s.back[j].second][i] = -v;
    }
    if (slack_of[i] >= 0)
      s.col[slack_of[i]][i] = flip[i] * (lp.relations[i] == '<' ? 1.0 : -1.0);
  }
  s.basis.assign(nr, -1);
  for (int i = 0; i < nr; ++i)
    if (slack_of[i] >= 0 && s.col[slack_of[i]][i] > 0.5)
      s.basis[i] = slack_of[i];
  for (int i = 0; i < nr; ++i) {
    if (s.basis[i] >= 0) continue;
    s.basis[i] = (int)s.c.size();
    s.c.push_back(0.0);
    s.col.push_back(std::vector<double>(nr, 0.0));
    s.col.back()[i] = 1.0;
  }
  s.total = (int)s.c.size();
  return s;
}

// Revised simplex with an explicit dense basis inverse. Bland's rule on both
// the entering and the leaving side, so no anti-cycling perturbation is
// needed. The initial basis is the identity by construction.
class Simplex {
 public:
  explicit Simplex(Standardized& s) : s_(s), nr_((int)s.b.size()) {
    binv_.assign((std::size_t)nr_ * nr_, 0.0);
    for (int i = 0; i < nr_; ++i) binv_[(std::size_t)i * nr_ + i] = 1.0;
    xb_ = s_.b;
    inb_.assign(s_.total, 0);
    for (int i = 0; i < nr_; ++i) inb_[s_.basis[i]] = 1;
  }

  // Minimizes cost over the current basis; only columns below enter_limit
  // may enter. Returns false when an unbounded improving ray is found.
  bool optimize(const std::vector<double>& cost, int enter_limit) {
    for (;;) {
      if (++iterations_ > 200000 + 200LL * (nr_ + s_.total))
        throw Error("lp: iteration limit exceeded");
      std::vector<double> y(nr_, 0.0);  // y = c_B B^-1
      for (int i = 0; i < nr_; ++i) {
        double cb = cost[s_.basis[i]];
        if (cb == 0.0) continue;
        const double* row = &binv_[(std::size_t)i * nr_];
        for (int k = 0; k < nr_; ++k) y[k] += cb * row[k];
      }
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        if (inb_[j]) continue;
        double red = cost[j];
        const std::vector<double>& aj = s_.col[j];
        for (int k = 0; k < nr_; ++k) red -= y[k] * aj[k];
        if (red < -kTol) {
          enter = j;  // smallest eligible index
          break;
        }
      }
      if (enter < 0) return true;
      std::vector<double> d(nr_, 0.0);  // d = B^-1 a_enter
      const std::vector<double>& aj = s_.col[enter];
      for (int i = 0; i < nr_; ++i) {
        const double* row = &binv_[(std::size_t)i * nr_];
        double acc = 0.0;
        for (int k = 0; k < nr_; ++k) acc += row[k] * aj[k];
        d[i] = acc;
      }
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < nr_; ++i) {
        double ratio;
        if (d[i] > kPivotTol) {
          ratio = std::max(xb_[i], 0.0) / d[i];
        } else if (s_.basis[i] >= s_.art_begin && d[i] < -kPivotTol &&
                   xb_[i] <= kTol) {
          ratio = 0.0;  // an artificial parked at zero must not grow again
        } else {
          continue;
        }
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && s_.basis[i] < s_.basis[leave])) {
          if (leave < 0 || ratio < best) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, d);
    }
  }

  void pivot(int leave, int enter, const std::vector<double>& d) {
    const double piv = d[leave];
    double* lrow = &binv_[(std::size_t)leave * nr_];
    for (int k = 0; k < nr_; ++k) lrow[k] /= piv;
    double theta = xb_[leave] / piv;
    if (theta < 0.0 && theta > -1e-9) theta = 0.0;
    for (int i = 0; i < nr_; ++i) {
      if (i == leave || d[i] == 0.0) continue;
      double* row = &binv_[(std::size_t)i * nr_];
      for (int k = 0; k < nr_; ++k) row[k] -= d[i] * lrow[k];
      xb_[i] -= d[i] * theta;
      if (xb_[i] < 0.0 && xb_[i] > -1e-9) xb_[i] = 0.0;
    }
    xb_[leave] = theta;
    inb_[s_.basis[leave]] = 0;
    inb_[enter] = 1;
    s_.basis[leave] = enter;
    if (++pivots_since_refresh_ >= 64) refresh();
  }

  // x_B = B^-1 b, shedding accumulated drift
  void refresh() {
    pivots_since_refresh_ = 0;
    for (int i = 0; i < nr_; ++i) {
      const double* row = &binv_[(std::size_t)i * nr_];
      double acc = 0.0;
      for (int k = 0; k < nr_; ++k) acc += row[k] * s_.b[k];
      xb_[i] = acc < 0.0 && acc > -1e-9 ? 0.0 : acc;
    }
  }

  double basic_value(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < nr_; ++i) v += cost[s_.basis[i]] * xb_[i];
    return v;
  }

  Standardized& s_;
  int nr_;
  std::vector<double> binv_;  // row-major B^-1
  std::vector<double> xb_;
  std::vector<char> inb_;
  std::int64_t iterations_ = 0;
  int pivots_since_refresh_ = 0;
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  Standardized s = standardize(lp);
  const int nr = (int)s.b.size();
  Simplex sx(s);
  LpResult res;

  bool need_phase1 = false;
  for (int i = 0; i < nr; ++i)
    if (s.basis[i] >= s.art_begin) need_phase1 = true;
  if (need_phase1) {
    std::vector<double> c1(s.total, 0.0);
    for (int j = s.art_begin; j < s.total; ++j) c1[j] = 1.0;
    sx.optimize(c1, s.total);  // bounded below by zero, cannot return false
    if (sx.basic_value(c1) > kTol) {
      res.status = LpStatus::Infeasible;
      res.iterations = sx.iterations_;
      return res;
    }
  }
  std::vector<double> c2 = s.c;
  c2.resize(s.total, 0.0);
  if (!sx.optimize(c2, s.art_begin)) {
    res.status = LpStatus::Unbounded;
    res.iterations = sx.iterations_;
    return res;
  }
  sx.refresh();
  res.status = LpStatus::Optimal;
  res.iterations = sx.iterations_;
  std::vector<double> full(s.total, 0.0);
  for (int i = 0; i < nr; ++i) full[s.basis[i]] = std::max(sx.xb_[i], 0.0);
  res.x.assign(lp.objective.size(), 0.0);
  double value = 0.0;
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    double v = full[s.back[j].first];
    if (s.back[j].second >= 0) v -= full[s.back[j].second];
    res.x[j] = v;
    value += lp.objective[j] * v;
  }
  res.value = value;
  return res;
}

}  // namespace mba
