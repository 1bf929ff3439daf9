#pragma once
#include <cmath>
#include <vector>

#include "currentkit/multi_index.hpp"

namespace ck {

struct VectorBasis {};
struct CovectorBasis {};

// Grade-k element of the exterior algebra over R^d, dense coefficients in
// lexicographic basis order. The basis tag keeps k-vectors and k-covectors
// from being mixed up; the coefficient layout is identical.
template <class Basis>
struct Multivector {
  int d = 0, k = 0;
  std::vector<double> c;

  Multivector() = default;
  Multivector(int d_, int k_) : d(d_), k(k_) {
    check_grade(d, k);
    c.assign(binom(d, k), 0.0);
  }

  double& coeff(const MultiIndex& I) { return c[index_rank(d, I)]; }
  double coeff(const MultiIndex& I) const { return c[index_rank(d, I)]; }

  Multivector& operator+=(const Multivector& o) {
    require_same(o);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    require_same(o);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }

  void require_same(const Multivector& o) const {
    if (d != o.d || k != o.k)
      throw std::invalid_argument("multivector shape mismatch: (" + std::to_string(d) +
                                  "," + std::to_string(k) + ") vs (" + std::to_string(o.d) +
                                  "," + std::to_string(o.k) + ")");
  }
};

using KVector = Multivector<VectorBasis>;
using KCovector = Multivector<CovectorBasis>;

template <class B>
Multivector<B> operator+(Multivector<B> a, const Multivector<B>& b) { return a += b; }
template <class B>
Multivector<B> operator-(Multivector<B> a, const Multivector<B>& b) { return a -= b; }
template <class B>
Multivector<B> operator*(double s, Multivector<B> a) { return a *= s; }

template <class B>
Multivector<B> wedge(const Multivector<B>& u, const Multivector<B>& v) {
  if (u.d != v.d)
    throw std::invalid_argument("wedge: operands live in different dimensions");
  if (u.k + v.k > u.d)
    throw std::invalid_argument("wedge: grades " + std::to_string(u.k) + "+" +
                                std::to_string(v.k) + " exceed dimension " +
                                std::to_string(u.d));
  Multivector<B> out(u.d, u.k + v.k);
  auto ui = all_indices(u.d, u.k);
  auto vi = all_indices(v.d, v.k);
  MultiIndex merged;
  for (size_t a = 0; a < ui.size(); ++a) {
    if (u.c[a] == 0.0) continue;
    for (size_t b = 0; b < vi.size(); ++b) {
      if (v.c[b] == 0.0) continue;
      int s = merge_sign(ui[a], vi[b], merged);
      if (s == 0) continue;
      out.c[index_rank(out.d, merged)] += s * u.c[a] * v.c[b];
    }
  }
  return out;
}

// Euclidean inner product induced by an orthonormal basis: the basis
// k-vectors e_I form an orthonormal set, so this is a plain dot product.
template <class B>
double inner(const Multivector<B>& a, const Multivector<B>& b) {
  a.require_same(b);
  double s = 0.0;
  for (size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * b.c[i];
  return s;
}

// Duality pairing <omega, xi>; numerically the same sum, but stated
// separately so call sites say what they mean.
inline double pair(const KCovector& w, const KVector& v) {
  if (w.d != v.d || w.k != v.k)
    throw std::invalid_argument("pair: covector and vector shapes differ");
  double s = 0.0;
  for (size_t i = 0; i < w.c.size(); ++i) s += w.c[i] * v.c[i];
  return s;
}

template <class B>
double euclidean_norm(const Multivector<B>& a) {
  return std::sqrt(inner(a, a));
}

// Convenience: basis element e_I (or dx_I) with coefficient 1.
template <class B>
Multivector<B> basis_element(int d, const MultiIndex& I) {
  Multivector<B> v(d, static_cast<int>(I.size()));
  v.coeff(I) = 1.0;
  return v;
}

}  // namespace ck
