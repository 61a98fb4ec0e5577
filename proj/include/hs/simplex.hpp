#pragma once

#include <limits>
#include <vector>

namespace hs::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  int row;
  double val;
};

/// Sparse column with bounds [0, upper].
struct Column {
  std::vector<Entry> a;
  double cost = 0;
  double upper = kInf;
};

/// max (or min) c'x  s.t.  Ax <= b (or = b per row),  0 <= x <= upper.
///
/// Every problem this toolkit builds has a known feasible starting basis:
/// the slack basis when all rows are inequalities with b >= 0, or an
/// explicit per-row column hint (used for the equality-row flow forms).
/// The solver therefore runs a single primal phase.
struct Problem {
  int rows = 0;
  std::vector<double> rhs;
  std::vector<double> range;  // slack span: inf for <=, 0 for =, else ranged
  std::vector<Column> cols;
  bool maximize = true;

  int add_row(double b, bool eq = false) {
    rhs.push_back(b);
    range.push_back(eq ? 0.0 : kInf);
    return rows++;
  }
  /// lo <= ax <= hi encoded as ax + s = hi with s in [0, hi - lo]
  int add_ranged_row(double lo, double hi) {
    rhs.push_back(hi);
    range.push_back(hi - lo);
    return rows++;
  }
  int add_col(Column c) {
    cols.push_back(std::move(c));
    return int(cols.size()) - 1;
  }
};

enum class Status { Optimal, Unbounded, IterationLimit, BadStart };

struct Solution {
  Status status = Status::BadStart;
  double objective = 0;
  std::vector<double> x;     // one per user column
  std::vector<double> dual;  // one per row (row multipliers at optimality)
  double primal_residual = 0;
  double dual_residual = 0;
  int iterations = 0;
};

/// basis_hint: optional user-column index per row forming a feasible basis.
Solution solve(const Problem& p, const std::vector<int>* basis_hint = nullptr);

}  // namespace hs::lp
