#pragma once
#include "currentkit/kvector.hpp"
#include "currentkit/linalg.hpp"
#include "currentkit/mat.hpp"

namespace ck {

// Ordered list of k spanning vectors in R^d, stored as the columns of a
// d x k matrix. Not required to be orthonormal. k = 0 means the empty frame,
// whose k-vector is the scalar 1.
struct Frame {
  int d = 0, k = 0;
  Mat cols;

  Frame() = default;
  Frame(int d_, int k_) : d(d_), k(k_), cols(d_, k_) { check_grade(d, k); }
  explicit Frame(const Mat& m) : d(m.rows), k(m.cols), cols(m) { check_grade(d, k); }
};

// Plucker coordinates of span(v_1..v_k): coefficient of e_I is the k x k
// minor of the column matrix with rows picked by I. Equal to folding the
// columns together with repeated wedges, but cheaper and direct.
inline KVector frame_to_kvector(const Frame& f) {
  KVector out(f.d, f.k);
  if (f.k == 0) {
    out.c[0] = 1.0;
    return out;
  }
  auto idx = all_indices(f.d, f.k);
  Mat sub(f.k, f.k);
  for (size_t r = 0; r < idx.size(); ++r) {
    for (int i = 0; i < f.k; ++i)
      for (int j = 0; j < f.k; ++j) sub(i, j) = f.cols(idx[r][i], j);
    out.c[r] = det(sub);
  }
  return out;
}

// Same coordinates on the covector side (used for certificates).
inline KCovector frame_to_kcovector(const Frame& f) {
  KVector v = frame_to_kvector(f);
  KCovector w(f.d, f.k);
  w.c = v.c;
  return w;
}

// |v_1 ^ ... ^ v_k| = sqrt(det(F^T F)), the k-volume of the spanned
// parallelepiped. Gram form avoids enumerating minors.
inline double frame_volume(const Frame& f) {
  if (f.k == 0) return 1.0;
  return std::sqrt(std::max(0.0, det(matmul_tn(f.cols, f.cols))));
}

}  // namespace ck
