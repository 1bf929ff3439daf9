#pragma once
#include <algorithm>
#include <cmath>

#include "currentkit/frame.hpp"
#include "currentkit/kvector.hpp"
#include "currentkit/linalg.hpp"
#include "currentkit/rng.hpp"

namespace ck {

// Canonical form of a 2-vector: v = sum_i sigma_i u_i ^ w_i with descending
// sigma_i > 0 and the (u_i, w_i) jointly orthonormal. The coefficients of v
// fill an antisymmetric matrix A; the planes are recovered from the
// eigenvectors of -A^2, pairing each u with w = -A u / sigma.
struct Spectral2 {
  std::vector<double> sigma;
  std::vector<Mat> planes;  // d x 2, orthonormal columns
};

template <class B>
Spectral2 spectral_decompose_2vector(const Multivector<B>& v) {
  if (v.k != 2) throw capability_error("spectral decomposition needs grade 2");
  int d = v.d;
  Mat A(d, d);
  auto idx = all_indices(d, 2);
  for (size_t r = 0; r < idx.size(); ++r) {
    A(idx[r][0], idx[r][1]) = v.c[r];
    A(idx[r][1], idx[r][0]) = -v.c[r];
  }
  Mat M = -1.0 * matmul(A, A);  // = A^T A, symmetric PSD with doubled sigma^2
  EigSym e = eig_sym(M);
  double top = e.values.empty() ? 0.0 : std::max(0.0, e.values.back());
  double tol = 1e-12 * (1.0 + top);

  Spectral2 out;
  // walk eigenvalues from largest down, grouping near-equal ones
  int j = d - 1;
  while (j >= 0 && e.values[j] > tol) {
    int lo = j;
    while (lo - 1 >= 0 && std::fabs(e.values[lo - 1] - e.values[j]) <= 1e-9 * (1.0 + top))
      --lo;
    double sigma = std::sqrt(std::max(0.0, e.values[j]));
    // basis of the eigenspace
    std::vector<std::vector<double>> basis;
    for (int t = lo; t <= j; ++t) basis.push_back(e.vectors.col(t));
    while (!basis.empty()) {
      std::vector<double> u = basis.front();
      double nu = norm2(u);
      if (nu < 1e-12) { basis.erase(basis.begin()); continue; }
      for (double& x : u) x /= nu;
      std::vector<double> w = matvec(A, u);
      for (double& x : w) x = -x / sigma;
      Mat plane(d, 2);
      plane.set_col(0, u);
      plane.set_col(1, w);
      out.sigma.push_back(sigma);
      out.planes.push_back(plane);
      // deflate the eigenspace by the plane just extracted
      std::vector<std::vector<double>> next;
      for (auto& b : basis) {
        double cu = dot(b, u), cw = dot(b, w);
        for (int i = 0; i < d; ++i) b[i] -= cu * u[i] + cw * w[i];
        if (norm2(b) > 1e-9) next.push_back(b);
      }
      // re-orthonormalize what is left
      Mat Q(d, static_cast<int>(next.size()));
      for (int t = 0; t < Q.cols; ++t) Q.set_col(t, next[t]);
      Q = orthonormalize_cols(Q, 1e-9);
      basis.clear();
      for (int t = 0; t < Q.cols; ++t) basis.push_back(Q.col(t));
    }
    j = lo - 1;
  }
  return out;
}

namespace detail {

// Maximize sum_I coeffs_I * minor_I(F) over orthonormal frames F by cyclic
// column ascent: with all but column i fixed the objective is linear in that
// column, and the constrained optimum is the normalized projection of the
// linear form onto the orthogonal complement of the other columns.
struct SimpleFit {
  double value = 0.0;
  Frame frame;
};

template <class B>
SimpleFit best_simple_fit(const Multivector<B>& w, int restarts, Rng rng) {
  int d = w.d, k = w.k;
  SimpleFit best;
  best.frame = Frame(d, k);
  if (k == 0) {
    best.value = std::fabs(w.c[0]);
    return best;
  }
  auto idx = all_indices(d, k);

  auto objective = [&](const Frame& f) {
    KVector kv = frame_to_kvector(f);
    double s = 0.0;
    for (size_t i = 0; i < kv.c.size(); ++i) s += w.c[i] * kv.c[i];
    return s;
  };

  for (int r = 0; r < restarts; ++r) {
    Frame f(d, k);
    if (r == 0) {
      // deterministic seed: the basis frame of the largest coefficient
      size_t arg = 0;
      for (size_t i = 1; i < w.c.size(); ++i)
        if (std::fabs(w.c[i]) > std::fabs(w.c[arg])) arg = i;
      for (int j = 0; j < k; ++j) f.cols(idx[arg][j], j) = 1.0;
    } else {
      f.cols = haar_frame(rng, d, k);
    }
    double val = objective(f);
    for (int it = 0; it < 200; ++it) {
      double before = val;
      for (int col = 0; col < k; ++col) {
        // linear form c[a] = objective with column `col` replaced by e_a
        std::vector<double> saved = f.cols.col(col);
        std::vector<double> c(d);
        for (int a = 0; a < d; ++a) {
          std::vector<double> ea(d, 0.0);
          ea[a] = 1.0;
          f.cols.set_col(col, ea);
          c[a] = objective(f);
        }
        // project away the other columns, then normalize
        for (int p = 0; p < k; ++p) {
          if (p == col) continue;
          std::vector<double> u = f.cols.col(p);
          double cu = dot(c, u);
          for (int i = 0; i < d; ++i) c[i] -= cu * u[i];
        }
        double n = norm2(c);
        if (n < 1e-14) {
          f.cols.set_col(col, saved);
          continue;
        }
        for (double& x : c) x /= n;
        f.cols.set_col(col, c);
      }
      val = objective(f);
      if (val - before <= 1e-13 * (1.0 + std::fabs(val))) break;
    }
    if (val > best.value) {
      best.value = val;
      best.frame = f;
    }
  }
  return best;
}

}  // namespace detail

// Closed-form comass. Grades 0, 1, d-1 and d are Euclidean (every such
// element is simple); grade 2 is the largest sigma of the canonical form.
template <class B>
double comass_exact(const Multivector<B>& w) {
  if (w.k == 0 || w.k == w.d) return std::fabs(w.c.empty() ? 0.0 : w.c[0]);
  if (w.k == 1 || w.k == w.d - 1) return euclidean_norm(w);
  if (w.k == 2) {
    Spectral2 s = spectral_decompose_2vector(w);
    return s.sigma.empty() ? 0.0 : s.sigma.front();
  }
  throw capability_error("no closed-form comass for grade " + std::to_string(w.k) +
                         " in dimension " + std::to_string(w.d));
}

template <class B>
double mass_exact(const Multivector<B>& v) {
  if (v.k == 0 || v.k == v.d) return std::fabs(v.c.empty() ? 0.0 : v.c[0]);
  if (v.k == 1 || v.k == v.d - 1) return euclidean_norm(v);
  if (v.k == 2) {
    Spectral2 s = spectral_decompose_2vector(v);
    double m = 0.0;
    for (double x : s.sigma) m += x;
    return m;
  }
  throw capability_error("no closed-form mass for grade " + std::to_string(v.k) +
                         " in dimension " + std::to_string(v.d));
}

struct ComassEstimate {
  double value = 0.0;  // certified lower bound: attained by `argmax`
  Frame argmax;
};

// Multi-start projected ascent over unit simple k-vectors. The returned value
// is attained by a feasible frame, hence a lower bound on the comass.
template <class B>
ComassEstimate comass_estimate(const Multivector<B>& w, int restarts = 24,
                               uint64_t seed = 0) {
  detail::SimpleFit fit = detail::best_simple_fit(w, restarts, Rng(seed));
  // the objective is sign-symmetric: flipping one column negates it
  if (fit.value < 0.0) fit.value = -fit.value;
  return {fit.value, fit.frame};
}

struct MassBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Bracket the mass norm when no closed form applies. Upper: greedily peel the
// best simple approximation and add the l1 coefficient bound of whatever
// residual survives (each basis element is simple, so that tail is valid).
// Lower: pair v against unit simple covectors, whose comass is exactly 1.
template <class B>
MassBounds mass_bounds(const Multivector<B>& v, int restarts = 24, uint64_t seed = 0) {
  MassBounds out;
  out.lower = euclidean_norm(v);
  Multivector<B> resid = v;
  Rng rng(mix64(seed + 17));
  double peeled = 0.0;
  int64_t cap = binom(v.d, v.k) + 4;
  for (int64_t it = 0; it < cap; ++it) {
    if (euclidean_norm(resid) < 1e-10) break;
    detail::SimpleFit fit = detail::best_simple_fit(resid, restarts, rng.stream(it));
    if (fit.value <= 1e-12) break;
    KVector dir = frame_to_kvector(fit.frame);
    double along_v = 0.0;
    for (size_t i = 0; i < dir.c.size(); ++i) along_v += v.c[i] * dir.c[i];
    out.lower = std::max(out.lower, std::fabs(along_v));
    for (size_t i = 0; i < resid.c.size(); ++i) resid.c[i] -= fit.value * dir.c[i];
    peeled += fit.value;
  }
  double tail = 0.0;
  for (double x : resid.c) tail += std::fabs(x);
  out.upper = peeled + tail;
  out.upper = std::max(out.upper, out.lower);
  return out;
}

}  // namespace ck
