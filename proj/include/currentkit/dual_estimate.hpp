#pragma once
#include <vector>

#include "currentkit/currents.hpp"
#include "currentkit/flatgan.hpp"

namespace ck {

struct DualEstimateConfig {
  double lambda = 1.0;
  double rho = 10.0;
  double alpha = 1.0;
  int steps = 2000;
  int haar_per_point = 4;
  int interp_per_step = 16;
  int check_per_pair = 24;  // segment grid density for the final feasibility check
  int check_haar = 16;      // direction draws per check point (k = 1)
  double lr = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  uint64_t seed = 0;
  std::vector<int> d0_hidden{100, 100, 100};
  std::vector<int> d1_hidden{100, 100};
};

struct DualEstimateResult {
  double value = 0.0;        // pairing rescaled to feasibility on the check set
  double pairing = 0.0;      // <T, omega> at the trained form
  double penalty = 0.0;      // final-step constraint penalty (without rho)
  double check_ratio = 0.0;  // largest constraint ratio seen on the check set
  std::vector<double> history;
  Mlp d0, d1;
};

namespace detail {

// Largest ratio of constraint value to its bound over the check points:
// |<omega(x), v>| / lambda over unit directions, |d omega(x; frame)| / 1
// over orthonormal frames. Both are homogeneous in the network outputs, so
// scaling omega by 1/ratio makes it feasible on the check set.
inline double omega_check_ratio(int k, double lambda, double alpha, const MlpSpec& s0,
                                const Mlp& d0, const MlpSpec& s1, const Mlp& d1, const Mat& X,
                                const Mat& atom_dirs, int haar_draws, Rng& rng) {
  int d = X.rows, n = X.cols;
  Tape t;
  MlpVars v0 = push_params(t, d0);
  MlpVars v1;
  if (k >= 1) v1 = push_params(t, d1);
  Var x = t.input(X);
  OmegaGraph g = omega_forward(t, k, s0, v0, s1, v1, x);
  Mat o0 = t.val(g.o0);
  Mat gx = t.val(grad(t, t.sum_all(g.o0), {x})[0]);

  double ratio = 0.0;
  for (int j = 0; j < n; ++j) {
    double gn = 0.0;
    for (int r = 0; r < d; ++r) gn += gx(r, j) * gx(r, j);
    gn = std::sqrt(gn);
    if (k == 0) {
      ratio = std::max(ratio, std::fabs(o0(0, j)) / lambda);
      ratio = std::max(ratio, gn);
    } else {
      ratio = std::max(ratio, double(k + 1) * gn);  // frame-free part of |d omega|
    }
  }
  if (k == 0) return ratio;

  Mat o1 = t.val(g.o1);
  auto pair_ratio = [&](const Mat& V) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int r = 0; r < d; ++r) dot += o1(r, j) * V(r, j);
      ratio = std::max(ratio, std::fabs(o0(0, j) + alpha * dot) / lambda);
    }
  };
  if (atom_dirs.cols == n) pair_ratio(atom_dirs);
  for (int draw = 0; draw < haar_draws; ++draw) {
    Mat V(d, n);
    for (int j = 0; j < n; ++j) V.set_col(j, haar_frame(rng, d, 1).col(0));
    pair_ratio(V);
  }
  for (int draw = 0; draw < haar_draws; ++draw) {
    Mat V1(d, n), V2(d, n);
    for (int j = 0; j < n; ++j) {
      Mat f = haar_frame(rng, d, 2);
      V1.set_col(j, f.col(0));
      V2.set_col(j, f.col(1));
    }
    Var q2 = t.sum_rows(t.mul(g.o1, t.constant(V2)));
    Var q1 = t.sum_rows(t.mul(g.o1, t.constant(V1)));
    Mat a1 = t.val(jvp(t, q2, x, V1));
    Mat a2 = t.val(jvp(t, q1, x, V2));
    for (int j = 0; j < n; ++j) {
      double gn = 0.0;
      for (int r = 0; r < d; ++r) gn += gx(r, j) * gx(r, j);
      gn = std::sqrt(gn);
      ratio = std::max(ratio, double(k + 1) * gn + alpha * std::fabs(a1(0, j) - a2(0, j)));
    }
  }
  return ratio;
}

}  // namespace detail

// Maximizes <T, omega> - rho * penalty(omega) over neural forms omega by
// gradient ascent, then reports the pairing of the best rescale of the
// trained form that satisfies the dual constraints on a dense check set
// (atom locations plus uniform grids on segments between atom pairs).
// Since the pairing and the constraints are both homogeneous in omega, that
// rescale is exact, and the reported value estimates the scaled flat norm
// from below up to the density of the check set.
inline DualEstimateResult dual_flat_estimate(const DiscreteCurrent& T,
                                             const DualEstimateConfig& cfg) {
  if (T.k > 1) throw capability_error("dual estimate supports k = 0 and k = 1 only");
  if (T.atoms.empty()) throw std::invalid_argument("current has no atoms");
  int d = T.d, k = T.k, n = int(T.atoms.size());

  MlpSpec s0;
  s0.widths.push_back(d);
  for (int w : cfg.d0_hidden) s0.widths.push_back(w);
  s0.widths.push_back(1);
  s0.hidden = Act::leaky_relu;
  s0.leak = 0.2;
  MlpSpec s1;
  if (k >= 1) {
    s1.widths.push_back(d);
    for (int w : cfg.d1_hidden) s1.widths.push_back(w);
    s1.widths.push_back(d);
    s1.hidden = Act::leaky_relu;
    s1.leak = 0.2;
  }

  DualEstimateResult out;
  out.d0 = Mlp::init(s0, mix64(cfg.seed + 202));
  if (k >= 1) out.d1 = Mlp::init(s1, mix64(cfg.seed + 303));

  Mat X(d, n), W(1, n), Xi;
  if (k >= 1) Xi = Mat(d, n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < d; ++r) X(r, i) = T.atoms[i].x[r];
    W(0, i) = T.atoms[i].w;
    if (k >= 1) Xi.set_col(i, T.atoms[i].frame.cols.col(0));
  }

  Adam opt({cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
  Rng root(cfg.seed);
  Rng haar = root.stream(2);
  Rng interp = root.stream(4);
  PenaltyParams pp{k, cfg.lambda, cfg.alpha, cfg.haar_per_point};

  std::vector<Mat*> ps;
  for (auto& w : out.d0.W) ps.push_back(&w);
  for (auto& b : out.d0.b) ps.push_back(&b);
  if (k >= 1) {
    for (auto& w : out.d1.W) ps.push_back(&w);
    for (auto& b : out.d1.b) ps.push_back(&b);
  }

  out.history.reserve(cfg.steps);
  for (int step = 0; step < cfg.steps; ++step) {
    Tape t;
    MlpVars v0 = push_params(t, out.d0);
    MlpVars v1;
    if (k >= 1) v1 = push_params(t, out.d1);

    Var xa = t.input(X);
    OmegaGraph g = omega_forward(t, k, s0, v0, s1, v1, xa);
    Var row = k == 0 ? g.o0 : omega_pair(t, k, cfg.alpha, g, t.constant(Xi));
    Var pairing = t.sum_all(t.mul(row, t.constant(W)));

    int extra = n > 1 ? cfg.interp_per_step : 0;
    Mat P(d, n + extra);
    for (int i = 0; i < n; ++i) P.set_col(i, X.col(i));
    for (int e = 0; e < extra; ++e) {
      int i = interp.below(n);
      int j = interp.below(n - 1);
      if (j >= i) ++j;
      double s = interp.u01();
      for (int r = 0; r < d; ++r) P(r, n + e) = (1.0 - s) * X(r, i) + s * X(r, j);
    }
    Var pvar = omega_penalty(t, pp, s0, v0, s1, v1, t.input(P), haar);
    Var objective = t.sub(pairing, t.scale(pvar, cfg.rho));
    Var loss = t.scale(objective, -1.0);

    std::vector<Var> wrt = v0.all();
    if (k >= 1) {
      auto e1 = v1.all();
      wrt.insert(wrt.end(), e1.begin(), e1.end());
    }
    auto gs = grad(t, loss, wrt);
    std::vector<Mat> gm;
    gm.reserve(gs.size());
    for (Var gvar : gs) gm.push_back(t.val(gvar));
    opt.step(ps, gm);

    out.pairing = t.val(pairing)(0, 0);
    out.penalty = t.val(pvar)(0, 0);
    out.history.push_back(t.val(objective)(0, 0));
    if (!std::isfinite(out.history.back()))
      throw divergence_error("dual estimate objective became non-finite");
  }

  // recompute the pairing from the final weights, then normalize
  {
    Tape t;
    MlpVars v0 = push_params(t, out.d0);
    MlpVars v1;
    if (k >= 1) v1 = push_params(t, out.d1);
    OmegaGraph g = omega_forward(t, k, s0, v0, s1, v1, t.input(X));
    Var row = k == 0 ? g.o0 : omega_pair(t, k, cfg.alpha, g, t.constant(Xi));
    out.pairing = t.val(t.sum_all(t.mul(row, t.constant(W))))(0, 0);
  }

  int m = cfg.check_per_pair;
  int pairs = n * (n - 1) / 2;
  Mat C(d, n + pairs * m);
  Mat dirs;
  if (k >= 1) {
    dirs = Mat(d, C.cols);  // atom tangents at atoms, zero-padded elsewhere
    for (int i = 0; i < n; ++i) dirs.set_col(i, Xi.col(i));
  }
  for (int i = 0; i < n; ++i) C.set_col(i, X.col(i));
  {
    int at = n;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int q = 0; q < m; ++q, ++at) {
          double s = (q + 1.0) / (m + 1.0);
          for (int r = 0; r < d; ++r) C(r, at) = (1.0 - s) * X(r, i) + s * X(r, j);
          if (k >= 1) {
            // segment direction: candidate tangent for transported mass
            double len = 0.0;
            for (int r = 0; r < d; ++r) {
              double dr = X(r, j) - X(r, i);
              dirs(r, at) = dr;
              len += dr * dr;
            }
            len = std::sqrt(len);
            if (len > 1e-15)
              for (int r = 0; r < d; ++r) dirs(r, at) /= len;
          }
        }
  }
  Rng check_rng = root.stream(6);
  out.check_ratio = detail::omega_check_ratio(k, cfg.lambda, cfg.alpha, s0, out.d0, s1, out.d1,
                                              C, dirs, cfg.check_haar, check_rng);
  out.value = out.check_ratio > 1e-9 ? out.pairing / out.check_ratio : 0.0;
  return out;
}

}  // namespace ck
