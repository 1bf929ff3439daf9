#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "currentkit/errors.hpp"

namespace ck {

// min c.x  s.t.  A x = b, x >= 0, with A given by sparse columns.
// The caller supplies an initial basis whose basic solution is feasible.
struct LpProblem {
  int m = 0, n = 0;
  std::vector<double> c, b;
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, value)

  int add_col(double cost, std::vector<std::pair<int, double>> col) {
    c.push_back(cost);
    cols.push_back(std::move(col));
    n = static_cast<int>(c.size());
    return n - 1;
  }
};

struct LpResult {
  double objective = 0.0;
  std::vector<double> x;  // primal, size n
  std::vector<double> y;  // row duals, size m
  int iterations = 0;
};

// Revised simplex with an explicitly maintained basis inverse. Dantzig
// pricing, falling back to Bland's rule after a stall so degenerate ties
// cannot cycle. Periodic refactorization keeps the inverse honest.
class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& p, std::vector<int> basis) : p_(p), basis_(std::move(basis)) {
    if (static_cast<int>(basis_.size()) != p_.m)
      throw solver_error("initial basis size must equal row count");
    cscale_ = 1.0;
    for (double v : p_.c) cscale_ = std::max(cscale_, std::fabs(v));
    refactor();
    for (double v : xb_)
      if (v < -1e-7) throw solver_error("initial basis is not primal feasible");
  }

  LpResult solve() {
    const double eps_rc = 1e-9 * cscale_;
    const int64_t cap = 5000 + 500LL * (p_.m + p_.n);
    LpResult res;
    int stall = 0;
    bool bland = false;
    double last_obj = objective();
    while (true) {
      if (res.iterations++ > cap) throw solver_error("simplex pivot cap hit");
      if (res.iterations % 256 == 0) refactor();

      computeDuals();
      int enter = -1;
      double best = -eps_rc;
      for (int j = 0; j < p_.n; ++j) {
        if (in_basis_[j]) continue;
        double r = reducedCost(j);
        if (bland) {
          if (r < -eps_rc) { enter = j; break; }
        } else if (r < best) {
          best = r;
          enter = j;
        }
      }
      if (enter < 0) {
        if (bland) break;
        // one clean pass with a fresh factorization before declaring optimal
        refactor();
        computeDuals();
        bool any = false;
        for (int j = 0; j < p_.n && !any; ++j)
          if (!in_basis_[j] && reducedCost(j) < -eps_rc) any = true;
        if (!any) break;
        continue;
      }

      // direction through the basis
      std::vector<double> u(p_.m, 0.0);
      for (auto [row, val] : p_.cols[enter])
        for (int i = 0; i < p_.m; ++i) u[i] += val * binv_[i * p_.m + row];

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < p_.m; ++i) {
        if (u[i] <= 1e-11) continue;
        double r = std::max(xb_[i], 0.0) / u[i];
        if (r < ratio - 1e-12 * (1.0 + ratio) ||
            (r < ratio + 1e-12 * (1.0 + ratio) && (leave < 0 || basis_[i] < basis_[leave]))) {
          ratio = r;
          leave = i;
        }
      }
      if (leave < 0) throw solver_error("lp is unbounded below");

      pivot(enter, leave, u, ratio);

      double obj = objective();
      if (obj < last_obj - 1e-12 * (1.0 + std::fabs(last_obj))) {
        stall = 0;
        last_obj = obj;
      } else if (++stall > 64) {
        bland = true;
      }
    }

    res.objective = objective();
    res.x.assign(p_.n, 0.0);
    for (int i = 0; i < p_.m; ++i) res.x[basis_[i]] = std::max(xb_[i], 0.0);
    computeDuals();
    res.y = y_;
    return res;
  }

 private:
  const LpProblem& p_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<double> binv_, xb_, y_;
  double cscale_ = 1.0;

  double objective() const {
    double s = 0.0;
    for (int i = 0; i < p_.m; ++i) s += p_.c[basis_[i]] * xb_[i];
    return s;
  }

  void computeDuals() {
    y_.assign(p_.m, 0.0);
    for (int i = 0; i < p_.m; ++i) {
      double cb = p_.c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < p_.m; ++j) y_[j] += cb * binv_[i * p_.m + j];
    }
  }

  double reducedCost(int j) const {
    double r = p_.c[j];
    for (auto [row, val] : p_.cols[j]) r -= y_[row] * val;
    return r;
  }

  void pivot(int enter, int leave, const std::vector<double>& u, double ratio) {
    int m = p_.m;
    double piv = u[leave];
    double* br = &binv_[leave * m];
    for (int j = 0; j < m; ++j) br[j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || u[i] == 0.0) continue;
      double f = u[i];
      double* bi = &binv_[i * m];
      for (int j = 0; j < m; ++j) bi[j] -= f * br[j];
      xb_[i] -= f * ratio;
      if (xb_[i] < 0.0 && xb_[i] > -1e-9) xb_[i] = 0.0;
    }
    xb_[leave] = ratio;
    in_basis_[basis_[leave]] = 0;
    in_basis_[enter] = 1;
    basis_[leave] = enter;
  }

  // Rebuild the inverse and basic values from scratch.
  void refactor() {
    int m = p_.m;
    in_basis_.assign(p_.n, 0);
    std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      int j = basis_[i];
      if (j < 0 || j >= p_.n) throw solver_error("basis column out of range");
      in_basis_[j] = 1;
      for (auto [row, val] : p_.cols[j]) mat[static_cast<size_t>(row) * m + i] = val;
    }
    binv_.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) binv_[static_cast<size_t>(i) * m + i] = 1.0;
    // Gauss-Jordan with partial pivoting
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int i = col + 1; i < m; ++i)
        if (std::fabs(mat[static_cast<size_t>(i) * m + col]) >
            std::fabs(mat[static_cast<size_t>(piv) * m + col]))
          piv = i;
      double pv = mat[static_cast<size_t>(piv) * m + col];
      if (std::fabs(pv) < 1e-12) throw solver_error("basis matrix is singular");
      if (piv != col) {
        for (int j = 0; j < m; ++j) {
          std::swap(mat[static_cast<size_t>(piv) * m + j], mat[static_cast<size_t>(col) * m + j]);
          std::swap(binv_[static_cast<size_t>(piv) * m + j], binv_[static_cast<size_t>(col) * m + j]);
        }
      }
      double inv = 1.0 / mat[static_cast<size_t>(col) * m + col];
      for (int j = 0; j < m; ++j) {
        mat[static_cast<size_t>(col) * m + j] *= inv;
        binv_[static_cast<size_t>(col) * m + j] *= inv;
      }
      for (int i = 0; i < m; ++i) {
        if (i == col) continue;
        double f = mat[static_cast<size_t>(i) * m + col];
        if (f == 0.0) continue;
        for (int j = 0; j < m; ++j) {
          mat[static_cast<size_t>(i) * m + j] -= f * mat[static_cast<size_t>(col) * m + j];
          binv_[static_cast<size_t>(i) * m + j] -= f * binv_[static_cast<size_t>(col) * m + j];
        }
      }
    }
    xb_.assign(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) xb_[i] += binv_[static_cast<size_t>(i) * m + j] * p_.b[j];
  }
};

inline LpResult simplex_solve(const LpProblem& p, std::vector<int> initial_basis) {
  return DenseSimplex(p, std::move(initial_basis)).solve();
}

}  // namespace ck
