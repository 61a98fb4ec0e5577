#include "hs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hs::lp {

namespace {

// Bounded-variable revised simplex with a dense explicit basis inverse.
// Columns are sparse; slack columns are appended after the user columns
// (equality rows get a slack fixed at zero so the column layout stays
// uniform).
class Simplex {
 public:
  Simplex(const Problem& p, const std::vector<int>* hint) : p_(p) {
    m_ = p.rows;
    nU_ = int(p.cols.size());
    nT_ = nU_ + m_;
    cost_.assign(nT_, 0.0);
    upper_.assign(nT_, kInf);
    double cscale = 1.0;
    for (int j = 0; j < nU_; ++j) {
      cost_[j] = p.maximize ? p.cols[j].cost : -p.cols[j].cost;
      upper_[j] = p.cols[j].upper;
      cscale = std::max(cscale, std::abs(cost_[j]));
    }
    for (int r = 0; r < m_; ++r) upper_[nU_ + r] = p.range[r];
    dual_tol_ = 1e-9 * cscale;
    for (double b : p.rhs) bscale_ = std::max(bscale_, std::abs(b));

    state_.assign(nT_, AtLower);
    basic_pos_.assign(nT_, -1);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      int j = hint ? (*hint)[r] : nU_ + r;
      basis_[r] = j;
      basic_pos_[j] = r;
      state_[j] = Basic;
    }
    binv_.assign(size_t(m_) * m_, 0.0);
    xb_.assign(m_, 0.0);
  }

  Solution run() {
    Solution sol;
    if (!refactor()) {
      sol.status = Status::BadStart;
      return sol;
    }
    compute_xb();
    if (!basis_feasible(1e-7 * bscale_)) {
      sol.status = Status::BadStart;
      return sol;
    }

    const int iter_limit = 2000 + 200 * (m_ + nT_);
    int degenerate_run = 0;
    bool bland = false;
    bool duals_valid = false;
    int it = 0;
    int pivots = 0;
    for (; it < iter_limit; ++it) {
      if (pivots > 0 && pivots % 64 == 0) {
        refactor();
        compute_xb();
        ++pivots;  // avoid repeating until the next real pivot
        duals_valid = false;
      }
      if (!duals_valid) {
        compute_duals();
        duals_valid = true;  // bound flips leave the basis, hence pi, intact
        cand_.clear();
      }
      int j = bland ? price(true) : pick_entering();
      if (j < 0) break;  // optimal
      double step;
      int leave_pos;
      bool leave_at_upper;
      if (!ratio_test(j, step, leave_pos, leave_at_upper, bland)) {
        sol.status = Status::Unbounded;
        sol.iterations = it;
        return sol;
      }
      if (step <= 1e-12)
        ++degenerate_run;
      else
        degenerate_run = 0;
      if (degenerate_run > 100) bland = true;
      if (leave_pos >= 0) {
        duals_valid = false;
        ++pivots;
      }
      apply_pivot(j, step, leave_pos, leave_at_upper);
    }

    refactor();
    compute_xb();
    compute_duals();

    sol.status = it >= iter_limit ? Status::IterationLimit : Status::Optimal;
    sol.iterations = it;
    sol.x.assign(nU_, 0.0);
    for (int j = 0; j < nU_; ++j) sol.x[j] = value_of(j);
    sol.dual.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r)
      sol.dual[r] = p_.maximize ? pi_[r] : -pi_[r];
    double obj = 0;
    for (int j = 0; j < nU_; ++j) obj += p_.cols[j].cost * sol.x[j];
    sol.objective = obj;
    sol.primal_residual = primal_residual(sol.x);
    sol.dual_residual = dual_residual();
    return sol;
  }

 private:
  enum VarState : char { AtLower, AtUpper, Basic };

  double value_of(int j) const {
    if (state_[j] == Basic) return xb_[basic_pos_[j]];
    return state_[j] == AtUpper ? upper_[j] : 0.0;
  }

  // column j of the full (user + slack) matrix applied to out += x * a_j
  template <class F>
  void for_col(int j, F&& f) const {
    if (j < nU_) {
      for (const Entry& e : p_.cols[j].a) f(e.row, e.val);
    } else {
      f(j - nU_, 1.0);
    }
  }

  bool refactor() {
    // Gauss-Jordan inverse of the basis matrix with partial pivoting.
    std::vector<double> B(size_t(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r)
      for_col(basis_[r], [&](int row, double v) { B[size_t(row) * m_ + r] = v; });
    std::vector<double>& inv = binv_;
    std::fill(inv.begin(), inv.end(), 0.0);
    for (int i = 0; i < m_; ++i) inv[size_t(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(B[size_t(col) * m_ + col]);
      for (int r = col + 1; r < m_; ++r) {
        double v = std::abs(B[size_t(r) * m_ + col]);
        if (v > best) best = v, piv = r;
      }
      if (best < 1e-12) return false;  // singular basis
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(B[size_t(piv) * m_ + k], B[size_t(col) * m_ + k]);
          std::swap(inv[size_t(piv) * m_ + k], inv[size_t(col) * m_ + k]);
        }
      }
      double d = 1.0 / B[size_t(col) * m_ + col];
      for (int k = 0; k < m_; ++k) {
        B[size_t(col) * m_ + k] *= d;
        inv[size_t(col) * m_ + k] *= d;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        double factor = B[size_t(r) * m_ + col];
        if (factor == 0) continue;
        for (int k = 0; k < m_; ++k) {
          B[size_t(r) * m_ + k] -= factor * B[size_t(col) * m_ + k];
          inv[size_t(r) * m_ + k] -= factor * inv[size_t(col) * m_ + k];
        }
      }
    }
    return true;
  }

  void compute_xb() {
    // x_B = Binv (b - sum of nonbasic-at-upper columns)
    std::vector<double> r(p_.rhs);
    for (int j = 0; j < nT_; ++j)
      if (state_[j] == AtUpper && upper_[j] != 0.0)
        for_col(j, [&](int row, double v) { r[row] -= v * upper_[j]; });
    for (int i = 0; i < m_; ++i) {
      double acc = 0;
      const double* row = &binv_[size_t(i) * m_];
      for (int k = 0; k < m_; ++k) acc += row[k] * r[k];
      xb_[i] = acc;
    }
  }

  bool basis_feasible(double tol) const {
    for (int i = 0; i < m_; ++i) {
      double u = upper_[basis_[i]];
      if (xb_[i] < -tol || xb_[i] > u + tol) return false;
    }
    return true;
  }

  void compute_duals() {
    pi_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb == 0) continue;
      const double* row = &binv_[size_t(i) * m_];
      for (int k = 0; k < m_; ++k) pi_[k] += cb * row[k];
    }
  }

  double reduced_cost(int j) const {
    double d = cost_[j];
    if (j < nU_) {
      for (const Entry& e : p_.cols[j].a) d -= pi_[e.row] * e.val;
    } else {
      d -= pi_[j - nU_];
    }
    return d;
  }

  // Candidate-list pricing: one full scan caches the best eligible columns;
  // bound flips keep the duals, so candidates stay usable and each pop is
  // revalidated against the current state before use.
  int pick_entering() {
    while (true) {
      while (!cand_.empty()) {
        int j = cand_.back().second;
        cand_.pop_back();
        if (state_[j] == Basic || upper_[j] == 0.0) continue;
        double d = reduced_cost(j);
        if (state_[j] == AtLower && d > dual_tol_) return j;
        if (state_[j] == AtUpper && d < -dual_tol_) return j;
      }
      for (int j = 0; j < nT_; ++j) {
        if (state_[j] == Basic || upper_[j] == 0.0) continue;
        double d = reduced_cost(j);
        double score = 0;
        if (state_[j] == AtLower && d > dual_tol_) score = d;
        else if (state_[j] == AtUpper && d < -dual_tol_) score = -d;
        else continue;
        cand_.push_back({score, j});
      }
      if (cand_.empty()) return -1;
      const size_t keep = 64;
      if (cand_.size() > keep) {
        std::nth_element(cand_.begin(), cand_.begin() + keep, cand_.end(),
                         [](const auto& a, const auto& b) {
                           return a.first > b.first;
                         });
        cand_.resize(keep);
      }
      std::sort(cand_.begin(), cand_.end());  // ascending; best at the back
    }
  }

  int price(bool bland) const {
    int best = -1;
    double best_score = dual_tol_;
    for (int j = 0; j < nT_; ++j) {
      if (state_[j] == Basic) continue;
      if (upper_[j] == 0.0) continue;  // fixed
      double d = reduced_cost(j);
      double score = 0;
      if (state_[j] == AtLower && d > dual_tol_) score = d;
      else if (state_[j] == AtUpper && d < -dual_tol_) score = -d;
      else continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Direction of basic values when the entering variable moves by +t
  // toward improvement: x_B changes by -sign * t * y with y = Binv a_j.
  bool ratio_test(int j, double& step, int& leave_pos, bool& leave_at_upper,
                  bool bland) {
    y_.assign(m_, 0.0);
    for_col(j, [&](int row, double v) {
      const size_t base = size_t(row);
      for (int i = 0; i < m_; ++i) y_[i] += binv_[size_t(i) * m_ + base] * v;
    });
    const double sign = (state_[j] == AtLower) ? 1.0 : -1.0;
    double best = upper_[j];  // bound flip of the entering variable
    leave_pos = -1;
    leave_at_upper = false;
    for (int i = 0; i < m_; ++i) {
      double dir = -sign * y_[i];
      double t;
      bool at_upper;
      if (dir < -1e-11) {  // basic value decreasing toward 0
        t = xb_[i] / (-dir);
        at_upper = false;
      } else if (dir > 1e-11 && upper_[basis_[i]] != kInf) {
        t = (upper_[basis_[i]] - xb_[i]) / dir;
        at_upper = true;
      } else {
        continue;
      }
      t = std::max(t, 0.0);
      if (t < best - 1e-12 ||
          (bland && leave_pos >= 0 && std::abs(t - best) <= 1e-12 &&
           basis_[i] < basis_[leave_pos])) {
        best = t;
        leave_pos = i;
        leave_at_upper = at_upper;
      }
    }
    step = best;
    return step != kInf;
  }

  void apply_pivot(int j, double step, int leave_pos, bool leave_at_upper) {
    const double sign = (state_[j] == AtLower) ? 1.0 : -1.0;
    for (int i = 0; i < m_; ++i) xb_[i] -= sign * step * y_[i];
    if (leave_pos < 0) {
      // bound flip
      state_[j] = (state_[j] == AtLower) ? AtUpper : AtLower;
      return;
    }
    int out = basis_[leave_pos];
    state_[out] = leave_at_upper ? AtUpper : AtLower;
    basic_pos_[out] = -1;
    double enter_value =
        (state_[j] == AtLower) ? step : upper_[j] - step;
    basis_[leave_pos] = j;
    basic_pos_[j] = leave_pos;
    state_[j] = Basic;
    xb_[leave_pos] = enter_value;
    // product-form update of Binv
    double piv = y_[leave_pos];
    double* prow = &binv_[size_t(leave_pos) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_pos) continue;
      double f = y_[i];
      if (f == 0) continue;
      double* row = &binv_[size_t(i) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
  }

  double primal_residual(const std::vector<double>& x) const {
    std::vector<double> ax(m_, 0.0);
    for (int j = 0; j < nU_; ++j)
      for (const Entry& e : p_.cols[j].a) ax[e.row] += e.val * x[j];
    double res = 0;
    for (int r = 0; r < m_; ++r) {
      double v = ax[r] - p_.rhs[r];
      res = std::max(res, v);
      if (p_.range[r] != kInf) res = std::max(res, -v - p_.range[r]);
    }
    for (int j = 0; j < nU_; ++j) {
      res = std::max(res, -x[j]);
      if (upper_[j] != kInf) res = std::max(res, x[j] - upper_[j]);
    }
    return res;
  }

  double dual_residual() const {
    double res = 0;
    for (int j = 0; j < nT_; ++j) {
      if (state_[j] == Basic || upper_[j] == 0.0) continue;
      double d = reduced_cost(j);
      if (state_[j] == AtLower)
        res = std::max(res, d);
      else
        res = std::max(res, -d);
    }
    return res;
  }

  const Problem& p_;
  int m_ = 0, nU_ = 0, nT_ = 0;
  double dual_tol_ = 1e-9;
  double bscale_ = 1.0;
  std::vector<double> cost_, upper_;
  std::vector<char> state_;
  std::vector<int> basis_, basic_pos_;
  std::vector<double> binv_, xb_, pi_, y_;
  std::vector<std::pair<double, int>> cand_;
};

}  // namespace

Solution solve(const Problem& p, const std::vector<int>* basis_hint) {
  Simplex s(p, basis_hint);
  return s.run();
}

}  // namespace hs::lp
