#pragma once
#include <algorithm>
#include <cmath>
#include <numeric>

#include "currentkit/mat.hpp"

namespace ck {

// Determinant by LU with partial pivoting. Intended for the small k x k
// minors that show up in frame computations.
inline double det(Mat A) {
  assert(A.rows == A.cols);
  int n = A.rows;
  if (n == 0) return 1.0;
  if (n == 1) return A(0, 0);
  if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(A(r, c)) > std::fabs(A(p, c))) p = r;
    if (A(p, c) == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(A(p, j), A(c, j));
      d = -d;
    }
    d *= A(c, c);
    for (int r = c + 1; r < n; ++r) {
      double f = A(r, c) / A(c, c);
      if (f == 0.0) continue;
      for (int j = c + 1; j < n; ++j) A(r, j) -= f * A(c, j);
    }
  }
  return d;
}

struct EigSym {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns, orthonormal
};

// Cyclic Jacobi for symmetric matrices. Plenty for the d <= 16 problems here.
inline EigSym eig_sym(Mat A) {
  assert(A.rows == A.cols);
  int n = A.rows;
  Mat V = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          double apj = A(p, j), aqj = A(q, j);
          A(p, j) = c * apj - s * aqj;
          A(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          double vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * viq;
          V(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  EigSym out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = A(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return out.values[a] < out.values[b]; });
  Mat W(n, n);
  std::vector<double> vals(n);
  for (int j = 0; j < n; ++j) {
    vals[j] = out.values[order[j]];
    for (int i = 0; i < n; ++i) W(i, j) = V(i, order[j]);
  }
  out.values = vals;
  out.vectors = W;
  return out;
}

// Modified Gram-Schmidt on the columns of A. Near-dependent columns are
// dropped, so the result may have fewer columns than the input.
inline Mat orthonormalize_cols(const Mat& A, double tol = 1e-12) {
  std::vector<std::vector<double>> basis;
  for (int j = 0; j < A.cols; ++j) {
    std::vector<double> v = A.col(j);
    for (int it = 0; it < 2; ++it)
      for (const auto& u : basis) {
        double c = dot(u, v);
        for (int i = 0; i < A.rows; ++i) v[i] -= c * u[i];
      }
    double n = norm2(v);
    if (n < tol) continue;
    for (double& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  Mat Q(A.rows, static_cast<int>(basis.size()));
  for (int j = 0; j < Q.cols; ++j) Q.set_col(j, basis[j]);
  return Q;
}

// Spectral norm (largest singular value) via the symmetric eigenproblem of
// A^T A; fine for the small matrices used in tests.
inline double spectral_norm(const Mat& A) {
  Mat G = matmul_tn(A, A);
  EigSym e = eig_sym(G);
  double m = e.values.empty() ? 0.0 : e.values.back();
  return std::sqrt(std::max(0.0, m));
}

}  // namespace ck
