#pragma once
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ck {

// Dense row-major matrix of doubles. Column vectors are r x 1.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::vector<double> data) : rows(r), cols(c), a(std::move(data)) {
    assert(a.size() == static_cast<size_t>(r) * c);
  }

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  size_t size() const { return a.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat col_vec(const std::vector<double>& v) {
    return Mat(static_cast<int>(v.size()), 1, v);
  }

  std::vector<double> col(int j) const {
    std::vector<double> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(int j, const std::vector<double>& v) {
    assert(static_cast<int>(v.size()) == rows);
    for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
  }
};

// C = A * B, ikj loop order so the inner loop runs along contiguous rows.
inline Mat matmul(const Mat& A, const Mat& B) {
  assert(A.cols == B.rows);
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    const double* arow = &A.a[static_cast<size_t>(i) * A.cols];
    double* crow = &C.a[static_cast<size_t>(i) * C.cols];
    for (int k = 0; k < A.cols; ++k) {
      double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = &B.a[static_cast<size_t>(k) * B.cols];
      for (int j = 0; j < B.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return C;
}

// C = A^T * B
inline Mat matmul_tn(const Mat& A, const Mat& B) {
  assert(A.rows == B.rows);
  Mat C(A.cols, B.cols);
  for (int k = 0; k < A.rows; ++k) {
    const double* arow = &A.a[static_cast<size_t>(k) * A.cols];
    const double* brow = &B.a[static_cast<size_t>(k) * B.cols];
    for (int i = 0; i < A.cols; ++i) {
      double aki = arow[i];
      if (aki == 0.0) continue;
      double* crow = &C.a[static_cast<size_t>(i) * C.cols];
      for (int j = 0; j < B.cols; ++j) crow[j] += aki * brow[j];
    }
  }
  return C;
}

// C = A * B^T
inline Mat matmul_nt(const Mat& A, const Mat& B) {
  assert(A.cols == B.cols);
  Mat C(A.rows, B.rows);
  for (int i = 0; i < A.rows; ++i) {
    const double* arow = &A.a[static_cast<size_t>(i) * A.cols];
    for (int j = 0; j < B.rows; ++j) {
      const double* brow = &B.a[static_cast<size_t>(j) * B.cols];
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += arow[k] * brow[k];
      C(i, j) = s;
    }
  }
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

inline Mat operator+(const Mat& A, const Mat& B) {
  assert(A.same_shape(B));
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}
inline Mat operator-(const Mat& A, const Mat& B) {
  assert(A.same_shape(B));
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}
inline Mat operator*(double s, const Mat& A) {
  Mat C = A;
  for (double& x : C.a) x *= s;
  return C;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

inline double frob_norm(const Mat& A) {
  double s = 0.0;
  for (double x : A.a) s += x * x;
  return std::sqrt(s);
}

inline std::vector<double> matvec(const Mat& A, const std::vector<double>& x) {
  assert(A.cols == static_cast<int>(x.size()));
  std::vector<double> y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    const double* arow = &A.a[static_cast<size_t>(i) * A.cols];
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += arow[j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace ck
