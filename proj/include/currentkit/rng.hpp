#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "currentkit/linalg.hpp"
#include "currentkit/mat.hpp"

namespace ck {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded generator with hand-rolled transforms. std::* distributions are
// implementation-defined, which would make trajectories compiler-dependent,
// so the uniform and normal draws are spelled out here.
struct Rng {
  uint64_t seed = 0;
  std::mt19937_64 eng;

  explicit Rng(uint64_t s) : seed(s), eng(mix64(s)) {}

  // Independent child stream; deterministic in (seed, id).
  Rng stream(uint64_t id) const { return Rng(mix64(seed ^ mix64(id * 0x9e3779b9ull + 1))); }

  double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Box-Muller, uncached so every draw costs exactly two uniforms.
  double normal() {
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  int below(int n) { return static_cast<int>(eng() % static_cast<uint64_t>(n)); }
};

inline Mat gaussian_mat(Rng& rng, int rows, int cols) {
  Mat G(rows, cols);
  for (double& x : G.a) x = rng.normal();
  return G;
}

// Orthonormal d x k frame whose span is Haar-uniform on the Grassmannian.
// A Gaussian d x k matrix G is factored G = V S U^T through the k x k
// eigenproblem of G^T G; the left singular frame V is returned. Rotating G
// rotates V the same way, which gives the invariance the samplers rely on.
inline Mat haar_frame(Rng& rng, int d, int k) {
  assert(k >= 0 && k <= d);
  if (k == 0) return Mat(d, 0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat G = gaussian_mat(rng, d, k);
    Mat B = matmul_tn(G, G);
    EigSym e = eig_sym(B);
    if (e.values.front() < 1e-12) continue;  // degenerate draw, try again
    Mat V(d, k);
    for (int j = 0; j < k; ++j) {
      double inv_s = 1.0 / std::sqrt(e.values[j]);
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int t = 0; t < k; ++t) s += G(i, t) * e.vectors(t, j);
        V(i, j) = s * inv_s;
      }
    }
    return V;
  }
  // Practically unreachable; fall back to an orthonormalized draw.
  return orthonormalize_cols(gaussian_mat(rng, d, k));
}

}  // namespace ck
