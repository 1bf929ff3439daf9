#include "catch_amalgamated.hpp"
#include "currentkit/frame.hpp"
#include "currentkit/kvector.hpp"
#include "currentkit/norms.hpp"
#include "currentkit/rng.hpp"

using namespace ck;
using Catch::Approx;

namespace {

KVector rand_kvector(Rng& rng, int d, int k, double scale = 1.0) {
  KVector v(d, k);
  for (double& c : v.c) c = scale * rng.uniform(-1.0, 1.0);
  return v;
}

KCovector rand_kcovector(Rng& rng, int d, int k, double scale = 1.0) {
  KCovector v(d, k);
  for (double& c : v.c) c = scale * rng.uniform(-1.0, 1.0);
  return v;
}

// Oracle: fold the frame columns together with repeated wedge products.
// Independent of the minor-based path in frame_to_kvector.
KVector wedge_fold(const Frame& f) {
  KVector acc(f.d, 0);
  acc.c[0] = 1.0;
  for (int j = 0; j < f.k; ++j) {
    KVector col(f.d, 1);
    for (int i = 0; i < f.d; ++i) col.c[i] = f.cols(i, j);
    acc = wedge(acc, col);
  }
  return acc;
}

// Oracle: inner product of simple k-vectors as a Gram determinant.
double inner_det_oracle(const Frame& W, const Frame& V) {
  return det(matmul_tn(W.cols, V.cols));
}

}  // namespace

TEST_CASE("multi-index enumeration and ranking", "[algebra]") {
  auto idx = all_indices(4, 2);
  REQUIRE(idx.size() == 6);
  CHECK(idx[0] == MultiIndex{0, 1});
  CHECK(idx[1] == MultiIndex{0, 2});
  CHECK(idx[2] == MultiIndex{0, 3});
  CHECK(idx[3] == MultiIndex{1, 2});
  CHECK(idx[4] == MultiIndex{1, 3});
  CHECK(idx[5] == MultiIndex{2, 3});
  for (int d = 1; d <= 8; ++d)
    for (int k = 0; k <= d; ++k) {
      auto all = all_indices(d, k);
      REQUIRE(static_cast<int64_t>(all.size()) == binom(d, k));
      for (int64_t r = 0; r < static_cast<int64_t>(all.size()); ++r)
        REQUIRE(index_rank(d, all[r]) == r);
    }
}

TEST_CASE("merge sign matches permutation parity", "[algebra]") {
  MultiIndex out;
  CHECK(merge_sign({0}, {1}, out) == 1);
  CHECK(out == MultiIndex{0, 1});
  CHECK(merge_sign({1}, {0}, out) == -1);
  CHECK(merge_sign({0, 2}, {1}, out) == -1);  // e0^e2^e1 = -e0^e1^e2
  CHECK(out == MultiIndex{0, 1, 2});
  CHECK(merge_sign({0, 1}, {1}, out) == 0);
  CHECK(merge_sign({2, 3}, {0, 1}, out) == 1);  // two elements jump over two
}

TEST_CASE("wedge is bilinear, graded-anticommutative, associative", "[algebra]") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 5;
    KVector a = rand_kvector(rng, d, 1), b = rand_kvector(rng, d, 1);
    KVector u = rand_kvector(rng, d, 2), w = rand_kvector(rng, d, 2);

    // alternating on vectors
    KVector aa = wedge(a, a);
    CHECK(euclidean_norm(aa) < 1e-12);

    // a ^ b = -(b ^ a), u ^ w = w ^ u (grades 2,2)
    KVector ab = wedge(a, b), ba = wedge(b, a);
    CHECK(euclidean_norm(ab + ba) < 1e-12);
    KVector uw = wedge(u, w), wu = wedge(w, u);
    CHECK(euclidean_norm(uw - wu) < 1e-12);

    // bilinearity
    double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2);
    KVector lin = wedge(al * a + be * b, u);
    KVector ref = al * wedge(a, u) + be * wedge(b, u);
    CHECK(euclidean_norm(lin - ref) < 1e-12);

    // associativity
    KVector c = rand_kvector(rng, d, 1);
    KVector left = wedge(wedge(a, b), c), right = wedge(a, wedge(b, c));
    CHECK(euclidean_norm(left - right) < 1e-12);
  }
  KVector e1 = basis_element<VectorBasis>(3, {0});
  KVector e2 = basis_element<VectorBasis>(3, {1});
  KVector e12 = wedge(e1, e2);
  CHECK(e12.coeff({0, 1}) == 1.0);
  KVector e21 = wedge(e2, e1);
  CHECK(e21.coeff({0, 1}) == -1.0);
  CHECK_THROWS_AS(wedge(e12, e12), std::invalid_argument);
}

TEST_CASE("frame to k-vector equals wedge fold and Gram volume", "[algebra]") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + rng.below(5);
    int k = 1 + rng.below(d);
    Frame f(d, k);
    for (double& x : f.cols.a) x = rng.uniform(-2.0, 2.0);
    KVector direct = frame_to_kvector(f);
    KVector folded = wedge_fold(f);
    REQUIRE(euclidean_norm(direct - folded) < 1e-10);
    CHECK(std::fabs(euclidean_norm(direct) - frame_volume(f)) < 1e-9);
  }
  Frame empty(3, 0);
  KVector one = frame_to_kvector(empty);
  CHECK(one.c.size() == 1);
  CHECK(one.c[0] == 1.0);
}

TEST_CASE("inner product of simples is the Gram determinant", "[algebra]") {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + rng.below(5);
    int k = 1 + rng.below(d);
    Frame W(d, k), V(d, k);
    for (double& x : W.cols.a) x = rng.uniform(-1.5, 1.5);
    for (double& x : V.cols.a) x = rng.uniform(-1.5, 1.5);
    double lhs = inner(frame_to_kvector(W), frame_to_kvector(V));
    double rhs = inner_det_oracle(W, V);
    REQUIRE(std::fabs(lhs - rhs) < 1e-9 * (1.0 + std::fabs(rhs)));
  }
}

TEST_CASE("spectral decomposition recovers planted canonical form", "[algebra]") {
  // planted 2-vector 3 e12 + 1 e34, then pushed through a random rotation;
  // the sigmas are rotation invariants, so {3, 1} is the expected spectrum
  Rng rng(51);
  KVector base(4, 2);
  base.coeff({0, 1}) = 3.0;
  base.coeff({2, 3}) = 1.0;

  Spectral2 s0 = spectral_decompose_2vector(base);
  REQUIRE(s0.sigma.size() == 2);
  CHECK(std::fabs(s0.sigma[0] - 3.0) < 1e-10);
  CHECK(std::fabs(s0.sigma[1] - 1.0) < 1e-10);

  for (int trial = 0; trial < 5; ++trial) {
    Mat R = haar_frame(rng, 4, 4);
    KVector rot(4, 2);
    {
      Frame p1(4, 2), p2(4, 2);
      for (int i = 0; i < 4; ++i) {
        p1.cols(i, 0) = R(i, 0);
        p1.cols(i, 1) = R(i, 1);
        p2.cols(i, 0) = R(i, 2);
        p2.cols(i, 1) = R(i, 3);
      }
      rot = 3.0 * frame_to_kvector(p1) + frame_to_kvector(p2);
    }
    Spectral2 s = spectral_decompose_2vector(rot);
    REQUIRE(s.sigma.size() == 2);
    CHECK(std::fabs(s.sigma[0] - 3.0) < 1e-9);
    CHECK(std::fabs(s.sigma[1] - 1.0) < 1e-9);
  }
}

TEST_CASE("spectral decomposition reconstructs the input", "[algebra]") {
  Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 3 + rng.below(4);  // 3..6, includes repeated-sigma cases at d>=4
    KVector v = rand_kvector(rng, d, 2);
    if (trial % 5 == 0) {
      // force a degenerate spectrum
      v = KVector(4 <= d ? d : 4, 2);
      v.coeff({0, 1}) = 1.0;
      v.coeff({2, 3}) = 1.0;
    }
    Spectral2 s = spectral_decompose_2vector(v);
    KVector rec(v.d, 2);
    for (size_t i = 0; i < s.sigma.size(); ++i) {
      REQUIRE(s.sigma[i] > 0.0);
      if (i > 0) REQUIRE(s.sigma[i] <= s.sigma[i - 1] + 1e-12);
      Mat F = s.planes[i];
      Mat G = matmul_tn(F, F);
      CHECK(frob_norm(G - Mat::identity(2)) < 1e-9);
      rec += s.sigma[i] * frame_to_kvector(Frame(F));
    }
    REQUIRE(euclidean_norm(rec - v) < 1e-8);
  }
}

TEST_CASE("mass and comass on the split 2-vector", "[algebra]") {
  KVector v(4, 2);
  v.coeff({0, 1}) = 1.0;
  v.coeff({2, 3}) = 1.0;
  CHECK(std::fabs(mass_exact(v) - 2.0) < 1e-10);
  CHECK(std::fabs(euclidean_norm(v) - std::sqrt(2.0)) < 1e-10);

  KCovector w(4, 2);
  w.coeff({0, 1}) = 1.0;
  w.coeff({2, 3}) = 1.0;
  CHECK(std::fabs(comass_exact(w) - 1.0) < 1e-10);

  KVector v2(4, 2);
  v2.coeff({0, 1}) = 2.0;
  v2.coeff({2, 3}) = 1.0;
  CHECK(std::fabs(mass_exact(v2) - 3.0) < 1e-10);
  CHECK(std::fabs(comass_exact(v2) - 2.0) < 1e-10);
}

TEST_CASE("closed-form norms at boundary grades are Euclidean", "[algebra]") {
  Rng rng(71);
  for (int d : {2, 3, 5}) {
    KVector v1 = rand_kvector(rng, d, 1);
    CHECK(mass_exact(v1) == Approx(euclidean_norm(v1)).margin(1e-12));
    CHECK(comass_exact(v1) == Approx(euclidean_norm(v1)).margin(1e-12));
    KVector vd = rand_kvector(rng, d, d);
    CHECK(mass_exact(vd) == Approx(std::fabs(vd.c[0])).margin(1e-12));
    KVector vtop = rand_kvector(rng, d, d - 1);
    CHECK(mass_exact(vtop) == Approx(euclidean_norm(vtop)).margin(1e-12));
  }
  KVector v(6, 3);
  CHECK_THROWS_AS(mass_exact(v), capability_error);
  CHECK_THROWS_AS(comass_exact(v), capability_error);
}

TEST_CASE("norm ordering and duality sandwich", "[algebra]") {
  Rng rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 4 + rng.below(3);
    KVector v = rand_kvector(rng, d, 2, 2.0);
    double m = mass_exact(v), e = euclidean_norm(v), c = comass_exact(v);
    CHECK(c <= e + 1e-10);
    CHECK(e <= m + 1e-10);
    KCovector w = rand_kcovector(rng, d, 2, 2.0);
    double p = 0.0;
    for (size_t i = 0; i < v.c.size(); ++i) p += v.c[i] * w.c[i];
    CHECK(std::fabs(p) <= mass_exact(v) * comass_exact(w) + 1e-9);
  }
}

TEST_CASE("comass estimate brackets the exact grade-2 value", "[algebra]") {
  Rng rng(97);
  for (int trial = 0; trial < 12; ++trial) {
    KCovector w = rand_kcovector(rng, 5, 2, 1.5);
    double exact = comass_exact(w);
    ComassEstimate est = comass_estimate(w, 32, 1000 + trial);
    CHECK(est.value <= exact + 1e-9);
    CHECK(est.value >= exact - 1e-6);
    // certificate actually attains the reported value
    Mat G = matmul_tn(est.argmax.cols, est.argmax.cols);
    CHECK(frob_norm(G - Mat::identity(2)) < 1e-8);
    double attained = 0.0;
    KVector cert = frame_to_kvector(est.argmax);
    for (size_t i = 0; i < cert.c.size(); ++i) attained += w.c[i] * cert.c[i];
    CHECK(std::fabs(std::fabs(attained) - est.value) < 1e-9);
  }
  KCovector split(4, 2);
  split.coeff({0, 1}) = 1.0;
  split.coeff({2, 3}) = 1.0;
  ComassEstimate est = comass_estimate(split, 16, 7);
  CHECK(est.value == Approx(1.0).margin(1e-8));
}

TEST_CASE("mass bounds bracket the exact grade-2 value", "[algebra]") {
  KVector v(4, 2);
  v.coeff({0, 1}) = 1.0;
  v.coeff({2, 3}) = 1.0;
  MassBounds b = mass_bounds(v, 24, 5);
  CHECK(b.lower >= std::sqrt(2.0) - 1e-8);
  CHECK(b.upper == Approx(2.0).margin(1e-6));
  CHECK(b.lower <= b.upper);

  Rng rng(113);
  for (int trial = 0; trial < 8; ++trial) {
    KVector u = rand_kvector(rng, 5, 2, 1.5);
    double exact = mass_exact(u);
    MassBounds mb = mass_bounds(u, 24, 100 + trial);
    CHECK(mb.lower <= exact + 1e-8);
    CHECK(mb.upper >= exact - 1e-8);
    CHECK(mb.lower >= euclidean_norm(u) - 1e-10);
  }
  // grade 3 has no closed form; bounds must still bracket the l1/l2 box
  KVector g3 = rand_kvector(rng, 6, 3);
  MassBounds mb3 = mass_bounds(g3, 16, 3);
  double l1 = 0.0;
  for (double x : g3.c) l1 += std::fabs(x);
  CHECK(mb3.lower >= euclidean_norm(g3) - 1e-10);
  CHECK(mb3.upper <= l1 + 1e-8);
  CHECK(mb3.lower <= mb3.upper + 1e-12);
}

TEST_CASE("haar frames are orthonormal and rotation invariant", "[algebra]") {
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + rng.below(5);
    int k = 1 + rng.below(d);
    Mat F = haar_frame(rng, d, k);
    Mat G = matmul_tn(F, F);
    REQUIRE(frob_norm(G - Mat::identity(k)) < 1e-10);
  }
  // k=1, d=2: direction should be uniform on the circle
  Rng dir_rng(171);
  std::vector<int> sector(8, 0);
  const int n = 4096;
  for (int i = 0; i < n; ++i) {
    Mat F = haar_frame(dir_rng, 2, 1);
    double ang = std::atan2(F(1, 0), F(0, 0));
    int s = static_cast<int>((ang + std::numbers::pi) / (2.0 * std::numbers::pi) * 8);
    sector[std::min(7, std::max(0, s))]++;
  }
  double chi2 = 0.0;
  for (int c : sector) chi2 += (c - n / 8.0) * (c - n / 8.0) / (n / 8.0);
  CHECK(chi2 < 24.0);  // 7 dof, far tail
}

TEST_CASE("eigensolver sanity on random symmetric matrices", "[algebra]") {
  Rng rng(151);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + rng.below(7);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A(i, j) = A(j, i) = rng.uniform(-1, 1);
    EigSym e = eig_sym(A);
    Mat V = e.vectors;
    CHECK(frob_norm(matmul_tn(V, V) - Mat::identity(n)) < 1e-10);
    Mat AV = matmul(A, V);
    Mat VL = V;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) VL(i, j) *= e.values[j];
    CHECK(frob_norm(AV - VL) < 1e-9);
  }
}

TEST_CASE("dimension guard rejects oversized spaces", "[algebra]") {
  CHECK_THROWS_AS(KVector(17, 2), capability_error);
  CHECK_THROWS_AS(KVector(5, 6), std::invalid_argument);
}
