#pragma once
#include <functional>
#include <memory>

#include "currentkit/kvector.hpp"
#include "currentkit/simplicial.hpp"

namespace ck {

inline double fd_step(const std::vector<double>& x) {
  return 1e-5 * (1.0 + norm2(x));
}

// Differentiable map between Euclidean spaces. If no Jacobian evaluator is
// supplied a central difference with step 1e-5 * (1 + |x|) is used.
struct SmoothMap {
  int in_dim = 0, out_dim = 0;
  std::function<std::vector<double>(const std::vector<double>&)> eval;
  std::function<Mat(const std::vector<double>&)> jac;

  std::vector<double> operator()(const std::vector<double>& x) const { return eval(x); }

  Mat jacobian(const std::vector<double>& x) const {
    if (jac) return jac(x);
    Mat J(out_dim, in_dim);
    double h = fd_step(x);
    for (int j = 0; j < in_dim; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto fp = eval(xp), fm = eval(xm);
      for (int i = 0; i < out_dim; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return J;
  }

  static SmoothMap linear(const Mat& A) {
    SmoothMap g;
    g.in_dim = A.cols;
    g.out_dim = A.rows;
    g.eval = [A](const std::vector<double>& x) { return matvec(A, x); };
    g.jac = [A](const std::vector<double>&) { return A; };
    return g;
  }

  static SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
    SmoothMap g;
    g.in_dim = inner.in_dim;
    g.out_dim = outer.out_dim;
    g.eval = [outer, inner](const std::vector<double>& x) { return outer(inner(x)); };
    g.jac = [outer, inner](const std::vector<double>& x) {
      return matmul(outer.jacobian(inner(x)), inner.jacobian(x));
    };
    return g;
  }
};

// Point-evaluable differential k-form.
class FormField {
 public:
  int d = 0, k = 0;

  FormField(int d_, int k_) : d(d_), k(k_) { check_grade(d_, k_); }
  virtual ~FormField() = default;

  virtual KCovector operator()(const std::vector<double>& x) const = 0;

  // Directional derivative d/dt <omega(x + t v), xi> at t = 0. Overridden by
  // forms that can differentiate analytically; default is central difference.
  virtual double directional_pair_derivative(const std::vector<double>& x,
                                             const KVector& xi,
                                             const std::vector<double>& v) const {
    double h = fd_step(x);
    std::vector<double> xp = x, xm = x;
    for (int i = 0; i < d; ++i) {
      xp[i] += h * v[i];
      xm[i] -= h * v[i];
    }
    return (pair((*this)(xp), xi) - pair((*this)(xm), xi)) / (2.0 * h);
  }
};

// Form backed by an arbitrary evaluator; derivatives go through the finite
// difference default.
class CallableForm final : public FormField {
 public:
  std::function<KCovector(const std::vector<double>&)> f;

  CallableForm(int d_, int k_, std::function<KCovector(const std::vector<double>&)> fn)
      : FormField(d_, k_), f(std::move(fn)) {}

  KCovector operator()(const std::vector<double>& x) const override { return f(x); }
};

struct Monomial {
  std::vector<int> exps;
  double coef = 0.0;
};
using Polynomial = std::vector<Monomial>;

inline double poly_eval(const Polynomial& p, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& m : p) {
    double t = m.coef;
    for (size_t i = 0; i < m.exps.size(); ++i)
      for (int e = 0; e < m.exps[i]; ++e) t *= x[i];
    s += t;
  }
  return s;
}

inline Polynomial poly_derivative(const Polynomial& p, int j) {
  Polynomial out;
  for (const auto& m : p) {
    if (m.exps[j] == 0) continue;
    Monomial dm = m;
    dm.coef *= m.exps[j];
    dm.exps[j] -= 1;
    out.push_back(dm);
  }
  return out;
}

// k-form with polynomial coefficient functions, one polynomial per basis
// covector in lexicographic order.
class PolynomialForm final : public FormField {
 public:
  std::vector<Polynomial> terms;

  PolynomialForm(int d_, int k_) : FormField(d_, k_), terms(binom(d_, k_)) {}

  KCovector operator()(const std::vector<double>& x) const override {
    KCovector w(d, k);
    for (size_t i = 0; i < terms.size(); ++i) w.c[i] = poly_eval(terms[i], x);
    return w;
  }

  double directional_pair_derivative(const std::vector<double>& x, const KVector& xi,
                                     const std::vector<double>& v) const override {
    double s = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
      if (xi.c[i] == 0.0) continue;
      for (int j = 0; j < d; ++j) {
        if (v[j] == 0.0) continue;
        s += xi.c[i] * v[j] * poly_eval(poly_derivative(terms[i], j), x);
      }
    }
    return s;
  }
};

// d omega at x on k+1 spanning vectors, via the alternating sum
//   sum_i (-1)^{i-1} grad_x <omega(x), v_1^..^v_i-hat^..^v_{k+1}> . v_i
// Each summand goes through directional_pair_derivative, so polynomial and
// autodiff-backed forms stay exact while generic ones fall back to FD.
inline double exterior_derivative(const FormField& w, const std::vector<double>& x,
                                  const Frame& vs) {
  if (vs.k != w.k + 1)
    throw std::invalid_argument("exterior derivative needs k+1 spanning vectors");
  double s = 0.0;
  for (int i = 0; i < vs.k; ++i) {
    Frame rest(vs.d, vs.k - 1);
    int c = 0;
    for (int j = 0; j < vs.k; ++j) {
      if (j == i) continue;
      for (int r = 0; r < vs.d; ++r) rest.cols(r, c) = vs.cols(r, j);
      ++c;
    }
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s += sign * w.directional_pair_derivative(x, frame_to_kvector(rest), vs.cols.col(i));
  }
  return s;
}

// Analytic exterior derivative of a polynomial form:
//   d(a_I dx_I) = sum_j (da_I/dx_j) dx_j ^ dx_I.
inline PolynomialForm exterior_derivative(const PolynomialForm& w) {
  PolynomialForm out(w.d, w.k + 1);
  auto idx = all_indices(w.d, w.k);
  MultiIndex merged;
  for (size_t r = 0; r < idx.size(); ++r) {
    for (int j = 0; j < w.d; ++j) {
      Polynomial dp = poly_derivative(w.terms[r], j);
      if (dp.empty()) continue;
      int sign = merge_sign({j}, idx[r], merged);
      if (sign == 0) continue;
      auto& dst = out.terms[index_rank(w.d, merged)];
      for (auto m : dp) {
        m.coef *= sign;
        dst.push_back(m);
      }
    }
  }
  return out;
}

// <(g* omega)(z), v_1^..^v_k> = <omega(g(z)), (Jv_1)^..^(Jv_k)>.
inline double pullback_eval(const SmoothMap& g, const FormField& w,
                            const std::vector<double>& z, const Frame& vs) {
  if (vs.k != w.k) throw std::invalid_argument("pullback: spanning grade mismatch");
  std::vector<double> x = g(z);
  if (w.k == 0) return w(x).c[0];
  Mat J = g.jacobian(z);
  Frame pushed(w.d, w.k);
  pushed.cols = matmul(J, vs.cols);
  return pair(w(x), frame_to_kvector(pushed));
}

namespace quad {

struct Point1 {
  double t, w;
};
// Gauss-Legendre on [0,1]; n points are exact through degree 2n-1.
inline std::vector<Point1> segment_rule(int degree) {
  auto from11 = [](std::initializer_list<std::pair<double, double>> nw) {
    std::vector<Point1> out;
    for (auto [n, w] : nw) out.push_back({0.5 * (n + 1.0), 0.5 * w});
    return out;
  };
  if (degree <= 1) return from11({{0.0, 2.0}});
  if (degree <= 3)
    return from11({{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}});
  if (degree <= 5)
    return from11({{-0.7745966692414834, 5.0 / 9.0},
                   {0.0, 8.0 / 9.0},
                   {0.7745966692414834, 5.0 / 9.0}});
  return from11({{-0.8611363115940526, 0.3478548451374538},
                 {-0.3399810435848563, 0.6521451548625461},
                 {0.3399810435848563, 0.6521451548625461},
                 {0.8611363115940526, 0.3478548451374538}});
}

struct Point2 {
  double u, v, w;  // barycentric remainder coordinates, weights sum to 1
};
inline std::vector<Point2> triangle_rule(int degree) {
  if (degree <= 1) return {{1.0 / 3.0, 1.0 / 3.0, 1.0}};
  if (degree <= 2)
    return {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
            {2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
            {1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0}};
  if (degree <= 4) {
    double a1 = 0.445948490915965, w1 = 0.223381589678011;
    double a2 = 0.091576213509771, w2 = 0.109951743655322;
    return {{a1, a1, w1},
            {1.0 - 2.0 * a1, a1, w1},
            {a1, 1.0 - 2.0 * a1, w1},
            {a2, a2, w2},
            {1.0 - 2.0 * a2, a2, w2},
            {a2, 1.0 - 2.0 * a2, w2}};
  }
  double a1 = 0.470142064105115, w1 = 0.132394152788506;
  double a2 = 0.101286507323456, w2 = 0.125939180544827;
  return {{1.0 / 3.0, 1.0 / 3.0, 0.225},
          {a1, a1, w1},
          {1.0 - 2.0 * a1, a1, w1},
          {a1, 1.0 - 2.0 * a1, w1},
          {a2, a2, w2},
          {1.0 - 2.0 * a2, a2, w2},
          {a2, 1.0 - 2.0 * a2, w2}};
}

}  // namespace quad

// Integrate a k-form over a grade-k chain. `degree` selects quadrature rules
// exact for polynomial integrands of that total degree; the default picks the
// 2-point Gauss rule on segments and the symmetric 3-point rule on triangles.
inline double integrate_over_chain(const FormField& w, const SimplicialComplex& sc,
                                   const Chain& ch, int degree = 2) {
  if (w.k != ch.grade) throw std::invalid_argument("form grade != chain grade");
  if (w.d != sc.d) throw std::invalid_argument("form dimension != complex dimension");
  double total = 0.0;
  if (ch.grade == 0) {
    for (size_t i = 0; i < ch.coeffs.size(); ++i) {
      if (ch.coeffs[i] == 0.0) continue;
      total += ch.coeffs[i] * w(sc.vertices[sc.cells[0][i][0]]).c[0];
    }
    return total;
  }
  if (ch.grade == 1) {
    auto rule = quad::segment_rule(degree);
    for (size_t i = 0; i < ch.coeffs.size(); ++i) {
      if (ch.coeffs[i] == 0.0) continue;
      const auto& e = sc.cells[1][i];
      const auto &a = sc.vertices[e[0]], &b = sc.vertices[e[1]];
      KVector tangent(sc.d, 1);
      for (int r = 0; r < sc.d; ++r) tangent.c[r] = b[r] - a[r];
      double s = 0.0;
      for (const auto& q : rule) {
        std::vector<double> x(sc.d);
        for (int r = 0; r < sc.d; ++r) x[r] = a[r] + q.t * (b[r] - a[r]);
        s += q.w * pair(w(x), tangent);
      }
      total += ch.coeffs[i] * s;
    }
    return total;
  }
  if (ch.grade == 2) {
    auto rule = quad::triangle_rule(degree);
    for (size_t i = 0; i < ch.coeffs.size(); ++i) {
      if (ch.coeffs[i] == 0.0) continue;
      const auto& t = sc.cells[2][i];
      const auto &a = sc.vertices[t[0]], &b = sc.vertices[t[1]], &c = sc.vertices[t[2]];
      Frame span(sc.d, 2);
      for (int r = 0; r < sc.d; ++r) {
        span.cols(r, 0) = b[r] - a[r];
        span.cols(r, 1) = c[r] - a[r];
      }
      KVector bivec = frame_to_kvector(span);
      double s = 0.0;
      for (const auto& q : rule) {
        std::vector<double> x(sc.d);
        for (int r = 0; r < sc.d; ++r)
          x[r] = a[r] + q.u * (b[r] - a[r]) + q.v * (c[r] - a[r]);
        s += q.w * pair(w(x), bivec);
      }
      total += ch.coeffs[i] * 0.5 * s;  // reference triangle has area 1/2
    }
    return total;
  }
  throw capability_error("integration implemented for grades 0..2");
}

}  // namespace ck
