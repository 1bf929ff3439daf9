#pragma once
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "currentkit/currents.hpp"
#include "currentkit/dense_lp.hpp"
#include "currentkit/errors.hpp"
#include "currentkit/network_simplex.hpp"
#include "currentkit/simplicial.hpp"

namespace ck {

struct FlatNormStats {
  int iterations = 0;
  double duality_gap = 0.0;
};

// Scaled flat norm of a weighted point current: the cheapest split
// T = A + boundary(B) where A pays lambda per unit mass at the points and
// B pays transport length. Solved exactly as a min-cost flow with a
// cost-lambda creation/destruction node.
struct PointFlatNorm {
  double value = 0.0;
  double lambda = 1.0;
  std::vector<std::vector<double>> points;  // merged support
  std::vector<double> weights;              // merged input weights
  std::vector<double> residual_weight;      // per point, the part paid at rate lambda
  std::vector<std::array<int, 2>> segments;  // transport (from, to) into the merged support
  std::vector<double> segment_flow;
  std::vector<double> potential;  // dual: |phi_i| <= lambda, |phi_i - phi_j| <= dist(i,j)
  FlatNormStats stats;
};

inline double point_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace detail {

// Merge coincident atoms and drop exact zeros so the flow instance has
// distinct nodes.
inline void merge_support(const DiscreteCurrent& T, double tol,
                          std::vector<std::vector<double>>& pts, std::vector<double>& w) {
  for (const auto& atom : T.atoms) {
    int hit = -1;
    for (size_t i = 0; i < pts.size() && hit < 0; ++i)
      if (point_dist(pts[i], atom.x) <= tol) hit = static_cast<int>(i);
    if (hit < 0) {
      pts.push_back(atom.x);
      w.push_back(atom.w);
    } else {
      w[hit] += atom.w;
    }
  }
  size_t keep = 0;
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::fabs(v));
  for (size_t i = 0; i < pts.size(); ++i) {
    if (std::fabs(w[i]) <= 1e-14 * scale) continue;
    pts[keep] = pts[i];
    w[keep] = w[i];
    ++keep;
  }
  pts.resize(keep);
  w.resize(keep);
}

}  // namespace detail

inline PointFlatNorm flat_metric_points(const DiscreteCurrent& T, double lambda,
                                        double merge_tol = 1e-12) {
  if (T.k != 0) throw capability_error("exact flat norm needs a weighted point current");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  PointFlatNorm out;
  out.lambda = lambda;
  detail::merge_support(T, merge_tol, out.points, out.weights);
  int n = static_cast<int>(out.points.size());
  out.residual_weight.assign(n, 0.0);
  out.potential.assign(n, 0.0);
  if (n == 0) return out;

  McfProblem p;
  p.n = n + 1;  // last node creates/destroys mass at cost lambda
  int sink = n;
  p.supply = out.weights;
  double total = 0.0;
  for (double v : out.weights) total += v;
  p.supply.push_back(-total);

  std::vector<std::array<int, 2>> seg_of_arc;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      p.add_arc(i, j, point_dist(out.points[i], out.points[j]));
      seg_of_arc.push_back({i, j});
    }
  std::vector<int> to_sink(n), from_sink(n);
  for (int i = 0; i < n; ++i) {
    to_sink[i] = p.add_arc(i, sink, lambda);
    from_sink[i] = p.add_arc(sink, i, lambda);
  }

  McfResult r = network_simplex(p);
  out.value = r.objective;
  out.stats.iterations = r.iterations;

  double flow_scale = 0.0;
  for (double f : r.flow) flow_scale = std::max(flow_scale, f);
  for (size_t a = 0; a < seg_of_arc.size(); ++a) {
    if (r.flow[a] <= 1e-12 * (1.0 + flow_scale)) continue;
    out.segments.push_back(seg_of_arc[a]);
    out.segment_flow.push_back(r.flow[a]);
  }
  double dual_value = 0.0;
  for (int i = 0; i < n; ++i) {
    out.residual_weight[i] = r.flow[to_sink[i]] - r.flow[from_sink[i]];
    out.potential[i] = r.potential[i] - r.potential[sink];
    dual_value += out.weights[i] * out.potential[i];
  }
  out.stats.duality_gap = std::fabs(out.value - dual_value);
  return out;
}

inline PointFlatNorm flat_metric(const DiscreteCurrent& S, const DiscreteCurrent& T,
                                 double lambda) {
  return flat_metric_points(S - T, lambda);
}

// Flat norm of a 1-chain inside a triangulated complex: split t = a + del b
// with a over edges at cost lambda * length and b over triangles at cost
// area. Sign-split linear program, solved with the dense simplex.
struct SimplicialFlatNorm {
  double value = 0.0;
  double lambda = 1.0;
  Chain a;  // grade 1 part, paid at rate lambda
  Chain b;  // grade 2 fill
  std::vector<double> edge_potential;
  FlatNormStats stats;
};

inline SimplicialFlatNorm flat_norm_simplicial(const SimplicialComplex& sc, const Chain& t,
                                               double lambda) {
  if (t.grade != 1) throw capability_error("simplicial flat norm expects an edge chain");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  int ne = static_cast<int>(sc.cells[1].size());
  int nf = static_cast<int>(sc.cells[2].size());
  if (static_cast<int>(t.coeffs.size()) != ne)
    throw std::invalid_argument("chain length does not match edge count");

  LpProblem lp;
  lp.m = ne;
  lp.b = t.coeffs;

  std::vector<int> a_pos(ne), a_neg(ne);
  for (int e = 0; e < ne; ++e) {
    double len = sc.cell_volume(1, e);
    a_pos[e] = lp.add_col(lambda * len, {{e, 1.0}});
    a_neg[e] = lp.add_col(lambda * len, {{e, -1.0}});
  }
  std::vector<int> b_pos(nf), b_neg(nf);
  for (int f = 0; f < nf; ++f) {
    Chain unit{2, std::vector<double>(nf, 0.0)};
    unit.coeffs[f] = 1.0;
    Chain bd = boundary(sc, unit);
    std::vector<std::pair<int, double>> col;
    for (int e = 0; e < ne; ++e)
      if (bd.coeffs[e] != 0.0) col.push_back({e, bd.coeffs[e]});
    double area = sc.cell_volume(2, f);
    b_pos[f] = lp.add_col(area, col);
    for (auto& rv : col) rv.second = -rv.second;
    b_neg[f] = lp.add_col(area, col);
  }

  std::vector<int> basis(ne);
  for (int e = 0; e < ne; ++e) basis[e] = t.coeffs[e] >= 0.0 ? a_pos[e] : a_neg[e];

  LpResult r = simplex_solve(lp, basis);

  SimplicialFlatNorm out;
  out.value = r.objective;
  out.lambda = lambda;
  out.a = Chain{1, std::vector<double>(ne, 0.0)};
  out.b = Chain{2, std::vector<double>(nf, 0.0)};
  for (int e = 0; e < ne; ++e) out.a.coeffs[e] = r.x[a_pos[e]] - r.x[a_neg[e]];
  for (int f = 0; f < nf; ++f) out.b.coeffs[f] = r.x[b_pos[f]] - r.x[b_neg[f]];
  out.edge_potential = r.y;
  out.stats.iterations = r.iterations;
  double dual_value = 0.0;
  for (int e = 0; e < ne; ++e) dual_value += r.y[e] * t.coeffs[e];
  out.stats.duality_gap = std::fabs(r.objective - dual_value);
  return out;
}

// How the scaled flat norm relates to the unit-scale one. Two facts are
// checked: the two-sided equivalence
//     min(1, lambda) F_1(T) <= F_lambda(T) <= max(1, lambda) F_1(T)
// and the exact rescaling identity
//     F_lambda(T) = lambda^(k+1) F_1(dilate(T, 1/lambda))
// for k-currents (the mass of a dilated k-current picks up lambda^k and the
// transport distance one more factor).
struct ScalingCheck {
  double f_lambda = 0.0;
  double f_unit = 0.0;
  double f_unit_dilated = 0.0;
  double lower_env = 0.0, upper_env = 0.0;
  bool equivalence_ok = false;
  bool dilation_ok = false;
};

inline ScalingCheck flat_scaling_check(const DiscreteCurrent& T, double lambda,
                                       double tol = 1e-8) {
  ScalingCheck out;
  out.f_lambda = flat_metric_points(T, lambda).value;
  out.f_unit = flat_metric_points(T, 1.0).value;
  out.f_unit_dilated = flat_metric_points(dilate(T, 1.0 / lambda), 1.0).value;
  out.lower_env = std::min(1.0, lambda) * out.f_unit;
  out.upper_env = std::max(1.0, lambda) * out.f_unit;
  double slack = tol * (1.0 + std::fabs(out.f_lambda));
  out.equivalence_ok =
      out.f_lambda >= out.lower_env - slack && out.f_lambda <= out.upper_env + slack;
  double scaled = std::pow(lambda, T.k + 1) * out.f_unit_dilated;
  out.dilation_ok = std::fabs(out.f_lambda - scaled) <= slack;
  return out;
}

}  // namespace ck
