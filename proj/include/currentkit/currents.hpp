#pragma once
#include "currentkit/forms.hpp"
#include "currentkit/frame.hpp"
#include "currentkit/rng.hpp"

namespace ck {

// Weighted Dirac k-current: sum_i w_i * delta_{x_i} with an (un-normalized)
// orientation frame per atom. k = 0 atoms carry the empty frame, whose
// k-vector is the scalar 1, so evaluation degenerates to w_i * omega(x_i).
struct CurrentAtom {
  std::vector<double> x;
  double w = 0.0;
  Frame frame;
};

struct DiscreteCurrent {
  int d = 0, k = 0;
  std::vector<CurrentAtom> atoms;

  DiscreteCurrent() = default;
  DiscreteCurrent(int d_, int k_) : d(d_), k(k_) { check_grade(d_, k_); }

  void push_atom(std::vector<double> x, double w, Frame f = Frame()) {
    if (static_cast<int>(x.size()) != d)
      throw std::invalid_argument("atom point dimension mismatch");
    if (k == 0) {
      f = Frame(d, 0);
    } else if (f.d != d || f.k != k) {
      throw std::invalid_argument("atom frame shape mismatch");
    }
    atoms.push_back({std::move(x), w, std::move(f)});
  }
};

inline double evaluate(const DiscreteCurrent& T, const FormField& w) {
  if (T.d != w.d || T.k != w.k)
    throw std::invalid_argument("current and form shapes differ");
  double s = 0.0;
  for (const auto& a : T.atoms) s += a.w * pair(w(a.x), frame_to_kvector(a.frame));
  return s;
}

inline double mass(const DiscreteCurrent& T) {
  double s = 0.0;
  for (const auto& a : T.atoms) s += std::fabs(a.w) * frame_volume(a.frame);
  return s;
}

// g_# T: points through g, frame columns through the Jacobian of g.
inline DiscreteCurrent pushforward(const SmoothMap& g, const DiscreteCurrent& T) {
  if (g.in_dim != T.d) throw std::invalid_argument("pushforward dimension mismatch");
  DiscreteCurrent out(g.out_dim, T.k);
  for (const auto& a : T.atoms) {
    Frame f(g.out_dim, T.k);
    if (T.k > 0) f.cols = matmul(g.jacobian(a.x), a.frame.cols);
    out.push_atom(g(a.x), a.w, std::move(f));
  }
  return out;
}

// x -> lam * x. Scales every frame column by lam, so masses scale by lam^k.
inline DiscreteCurrent dilate(const DiscreteCurrent& T, double lam) {
  DiscreteCurrent out(T.d, T.k);
  for (const auto& a : T.atoms) {
    std::vector<double> x = a.x;
    for (double& v : x) v *= lam;
    Frame f = a.frame;
    for (double& v : f.cols.a) v *= lam;
    out.push_atom(std::move(x), a.w, std::move(f));
  }
  return out;
}

inline DiscreteCurrent operator-(const DiscreteCurrent& A, const DiscreteCurrent& B) {
  if (A.d != B.d || A.k != B.k)
    throw std::invalid_argument("current difference shape mismatch");
  DiscreteCurrent out = A;
  for (const auto& a : B.atoms) out.push_atom(a.x, -a.w, a.frame);
  return out;
}

// Per-coordinate product distribution for latent sampling.
struct CoordDist {
  enum Kind { kUniform, kGaussian } kind = kGaussian;
  double a = 0.0, b = 1.0;  // uniform: [a,b); gaussian: mean a, stddev b

  static CoordDist uniform(double lo, double hi) { return {kUniform, lo, hi}; }
  static CoordDist gaussian(double mean, double sd) { return {kGaussian, mean, sd}; }

  double sample(Rng& rng) const {
    return kind == kUniform ? rng.uniform(a, b) : a + b * rng.normal();
  }
};

struct LatentSpec {
  std::vector<CoordDist> coords;
  int dim() const { return static_cast<int>(coords.size()); }
};

// n weight-1/n samples of mu with the canonical orientation e_1^..^e_k.
inline DiscreteCurrent sample_latent_current(const LatentSpec& mu, int k, int n,
                                             uint64_t seed) {
  int d = mu.dim();
  check_grade(d, k);
  DiscreteCurrent out(d, k);
  Rng rng(seed);
  Frame f(d, k);
  for (int j = 0; j < k; ++j) f.cols(j, j) = 1.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (int c = 0; c < d; ++c) x[c] = mu.coords[c].sample(rng);
    out.push_atom(std::move(x), 1.0 / n, f);
  }
  return out;
}

}  // namespace ck
