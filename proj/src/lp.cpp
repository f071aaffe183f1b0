#include "hirob/lp.hpp"

#include <cmath>

namespace hirob {

LinearProgram::LinearProgram(int num_vars)
    : cost(Vector::Zero(num_vars)),
      lower(Vector::Zero(num_vars)),
      upper(Vector::Constant(num_vars, std::numeric_limits<double>::infinity())) {
  if (num_vars <= 0) throw ConfigError("linear program needs at least one variable");
}

void LinearProgram::add_row(Vector a, RowSense sense, double rhs) {
  if (a.size() != num_vars()) throw DimensionError("LP row length differs from variable count");
  rows.push_back(LpRow{std::move(a), sense, rhs});
}

void LinearProgram::set_bounds(int var, double lo, double hi) {
  if (lo > hi) throw ConfigError("LP bound lo > hi");
  lower[var] = lo;
  upper[var] = hi;
}

void LinearProgram::free_variable(int var) {
  set_bounds(var, -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity());
}

namespace {

// How an original variable maps onto nonnegative standard-form columns.
struct VarMap {
  enum Kind { Shifted, Reflected, Split } kind = Shifted;
  int col = 0;
  double offset = 0.0;
};

class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const LpOptions& opts) : opts_(opts) {
    m_ = static_cast<int>(A.rows());
    n_ = static_cast<int>(A.cols());
    // columns: structural [0, n), artificial [n, n+m), rhs at n+m
    T_ = Matrix::Zero(m_ + 1, n_ + m_ + 1);
    T_.block(0, 0, m_, n_) = A;
    T_.block(0, n_, m_, m_) = Matrix::Identity(m_, m_);
    T_.block(0, n_ + m_, m_, 1) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Returns false when the iteration limit is hit.
  bool phase_one(bool& feasible) {
    T_.row(m_).setZero();
    for (int i = 0; i < m_; ++i) T_.row(m_) -= T_.row(i);
    for (int i = 0; i < m_; ++i) T_(m_, n_ + i) = 0.0;
    allow_artificial_ = true;
    LpStatus st = iterate();
    if (st == LpStatus::IterationLimit) return false;
    const double infeas = -T_(m_, n_ + m_);
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(rhs_orig(i)));
    feasible = infeas <= opts_.feas_tol * scale;
    if (!feasible) return true;
    drive_out_artificials();
    return true;
  }

  LpStatus phase_two(const Vector& c) {
    allow_artificial_ = false;
    T_.row(m_).setZero();
    T_.block(m_, 0, 1, n_) = c.transpose();
    for (int i = 0; i < m_; ++i) {
      const int bcol = basis_[i];
      const double cb = bcol < n_ ? c[bcol] : 0.0;
      if (cb != 0.0) T_.row(m_) -= cb * T_.row(i);
    }
    return iterate();
  }

  Vector solution() const {
    Vector x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, T_(i, n_ + m_));
    return x;
  }

  void set_rhs_orig(Vector b) { b_orig_ = std::move(b); }

 private:
  double rhs_orig(int i) const { return b_orig_.size() ? b_orig_[i] : 0.0; }

  LpStatus iterate() {
    const int rhs = n_ + m_;
    const int ncols = allow_artificial_ ? n_ + m_ : n_;
    for (int it = 0; it < opts_.max_iterations; ++it) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (T_(m_, j) < -opts_.cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double piv = T_(i, enter);
        if (piv <= opts_.pivot_tol) continue;
        const double ratio = T_(i, rhs) / piv;
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(int r, int c) {
    T_.row(r) /= T_(r, c);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int best = -1;
      double best_abs = opts_.pivot_tol;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(T_(i, j)) > best_abs) {
          best_abs = std::abs(T_(i, j));
          best = j;
        }
      }
      // A row without structural entries is redundant; its artificial stays
      // basic at zero and can never leave or re-enter.
      if (best >= 0) pivot(i, best);
    }
  }

  const LpOptions& opts_;
  int m_ = 0;
  int n_ = 0;
  Matrix T_;
  std::vector<int> basis_;
  bool allow_artificial_ = true;
  Vector b_orig_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  const int nv = lp.num_vars();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<VarMap> maps(nv);
  int ncols = 0;
  std::vector<std::pair<int, double>> upper_rows;  // (column, bound) for x' <= hi - lo
  for (int k = 0; k < nv; ++k) {
    const double lo = lp.lower[k], hi = lp.upper[k];
    if (std::isnan(lo) || std::isnan(hi)) throw ConfigError("LP bound is NaN");
    if (lo > -inf) {
      maps[k] = {VarMap::Shifted, ncols++, lo};
      if (hi < inf) upper_rows.emplace_back(maps[k].col, hi - lo);
    } else if (hi < inf) {
      maps[k] = {VarMap::Reflected, ncols++, hi};
    } else {
      maps[k] = {VarMap::Split, ncols, 0.0};
      ncols += 2;
    }
  }

  const int nrows = static_cast<int>(lp.rows.size() + upper_rows.size());
  int nslack = 0;
  for (const auto& r : lp.rows)
    if (r.sense != RowSense::Equal) ++nslack;
  nslack += static_cast<int>(upper_rows.size());
  const int total = ncols + nslack;

  if (nrows == 0) {
    // Only bounds: each variable sits at whichever finite bound its cost prefers.
    LpResult res;
    res.x = Vector::Zero(nv);
    for (int k = 0; k < nv; ++k) {
      const double c = lp.cost[k];
      double val;
      if (c > 0.0) val = lp.lower[k];
      else if (c < 0.0) val = lp.upper[k];
      else val = std::isfinite(lp.lower[k]) ? lp.lower[k] : (std::isfinite(lp.upper[k]) ? lp.upper[k] : 0.0);
      if (!std::isfinite(val)) {
        res.status = LpStatus::Unbounded;
        return res;
      }
      res.x[k] = val;
    }
    res.status = LpStatus::Optimal;
    res.objective = lp.cost.dot(res.x);
    return res;
  }

  Matrix A = Matrix::Zero(nrows, total);
  Vector b = Vector::Zero(nrows);
  Vector c = Vector::Zero(total);
  for (int k = 0; k < nv; ++k) {
    const auto& m = maps[k];
    switch (m.kind) {
      case VarMap::Shifted:
        c[m.col] += lp.cost[k];
        break;
      case VarMap::Reflected:
        c[m.col] -= lp.cost[k];
        break;
      case VarMap::Split:
        c[m.col] += lp.cost[k];
        c[m.col + 1] -= lp.cost[k];
        break;
    }
  }

  int row = 0;
  int slack = ncols;
  for (const auto& r : lp.rows) {
    double rhs = r.rhs;
    for (int k = 0; k < nv; ++k) {
      const double a = r.a[k];
      if (a == 0.0) continue;
      const auto& m = maps[k];
      switch (m.kind) {
        case VarMap::Shifted:
          A(row, m.col) += a;
          rhs -= a * m.offset;
          break;
        case VarMap::Reflected:
          A(row, m.col) -= a;
          rhs -= a * m.offset;
          break;
        case VarMap::Split:
          A(row, m.col) += a;
          A(row, m.col + 1) -= a;
          break;
      }
    }
    if (r.sense == RowSense::LessEqual) A(row, slack++) = 1.0;
    else if (r.sense == RowSense::GreaterEqual) A(row, slack++) = -1.0;
    b[row] = rhs;
    ++row;
  }
  for (const auto& [col, bound] : upper_rows) {
    A(row, col) = 1.0;
    A(row, slack++) = 1.0;
    b[row] = bound;
    ++row;
  }
  for (int i = 0; i < nrows; ++i) {
    if (b[i] < 0.0) {
      A.row(i) *= -1.0;
      b[i] = -b[i];
    }
  }

  Tableau tab(A, b, opts);
  tab.set_rhs_orig(b);
  LpResult res;
  bool feasible = false;
  if (!tab.phase_one(feasible)) {
    res.status = LpStatus::IterationLimit;
    return res;
  }
  if (!feasible) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  res.status = tab.phase_two(c);
  if (res.status != LpStatus::Optimal) return res;

  const Vector z = tab.solution();
  res.x = Vector::Zero(nv);
  for (int k = 0; k < nv; ++k) {
    const auto& m = maps[k];
    switch (m.kind) {
      case VarMap::Shifted: res.x[k] = m.offset + z[m.col]; break;
      case VarMap::Reflected: res.x[k] = m.offset - z[m.col]; break;
      case VarMap::Split: res.x[k] = z[m.col] - z[m.col + 1]; break;
    }
  }
  res.objective = lp.cost.dot(res.x);
  return res;
}

LpResult solve_or_throw(const LinearProgram& lp, const LpOptions& opts) {
  LpResult res = solve_lp(lp, opts);
  if (res.status == LpStatus::IterationLimit)
    throw SolverError("simplex iteration limit reached");
  return res;
}

}  // namespace hirob
