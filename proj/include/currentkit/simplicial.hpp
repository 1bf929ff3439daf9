#pragma once
#include <array>
#include <map>
#include <vector>

#include "currentkit/errors.hpp"
#include "currentkit/frame.hpp"

namespace ck {

// Oriented simplicial complex up to grade 2, embedded in R^2 or R^3.
// Cells store vertex index tuples in their oriented order.
struct SimplicialComplex {
  int d = 2;
  std::vector<std::vector<double>> vertices;
  std::array<std::vector<std::vector<int>>, 3> cells;

  // sorted tuple -> (cell index, parity of stored order relative to sorted)
  std::array<std::map<std::vector<int>, std::pair<int, int>>, 3> lookup;

  void finalize() {
    for (int g = 0; g < 3; ++g) {
      lookup[g].clear();
      for (int i = 0; i < static_cast<int>(cells[g].size()); ++i) {
        auto key = cells[g][i];
        int sign = sort_parity(key);
        if (lookup[g].count(key))
          throw schema_error("duplicate cell in simplicial complex");
        lookup[g][key] = {i, sign};
      }
    }
  }

  // sorts in place, returns permutation sign (tuples have <= 3 entries)
  static int sort_parity(std::vector<int>& t) {
    int sign = 1;
    for (size_t i = 0; i < t.size(); ++i)
      for (size_t j = i + 1; j < t.size(); ++j)
        if (t[i] > t[j]) {
          std::swap(t[i], t[j]);
          sign = -sign;
        }
    return sign;
  }

  // columns are the edge vectors out of the first vertex, in oriented order
  Frame cell_frame(int grade, int i) const {
    const auto& t = cells[grade][i];
    Frame f(d, grade);
    for (int c = 1; c <= grade; ++c)
      for (int r = 0; r < d; ++r)
        f.cols(r, c - 1) = vertices[t[c]][r] - vertices[t[0]][r];
    return f;
  }

  double cell_volume(int grade, int i) const {
    if (grade == 0) return 1.0;
    double v = frame_volume(cell_frame(grade, i));
    return grade == 2 ? v / 2.0 : v;
  }

  // Axis-aligned rectangle triangulated on an nx x ny grid, every triangle
  // counterclockwise. Edges include the cell diagonals.
  static SimplicialComplex grid(double x0, double y0, double x1, double y1,
                                int nx, int ny) {
    SimplicialComplex sc;
    sc.d = 2;
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        sc.vertices.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
    for (int v = 0; v < static_cast<int>(sc.vertices.size()); ++v)
      sc.cells[0].push_back({v});
    std::map<std::vector<int>, int> edge_seen;
    auto add_edge = [&](int a, int b) {
      std::vector<int> key{std::min(a, b), std::max(a, b)};
      if (edge_seen.count(key)) return;
      edge_seen[key] = static_cast<int>(sc.cells[1].size());
      sc.cells[1].push_back(key);
    };
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), e = vid(i, j + 1);
        sc.cells[2].push_back({a, b, c});
        sc.cells[2].push_back({a, c, e});
        add_edge(a, b);
        add_edge(b, c);
        add_edge(a, c);
        add_edge(c, e);
        add_edge(a, e);
      }
    sc.finalize();
    return sc;
  }
};

// Formal weighted sum of same-grade cells.
struct Chain {
  int grade = 0;
  std::vector<double> coeffs;

  Chain() = default;
  Chain(int g, size_t n) : grade(g), coeffs(n, 0.0) {}
  Chain(int g, std::vector<double> c) : grade(g), coeffs(std::move(c)) {}
};

inline Chain full_chain(const SimplicialComplex& sc, int grade) {
  Chain c(grade, sc.cells[grade].size());
  for (double& x : c.coeffs) x = 1.0;
  return c;
}

// Oriented boundary: each face taken with the alternating sign from dropping
// one vertex, matched against the stored orientation of that face.
inline Chain boundary(const SimplicialComplex& sc, const Chain& ch) {
  if (ch.grade == 0) throw std::invalid_argument("boundary of a 0-chain");
  int g = ch.grade;
  if (ch.coeffs.size() != sc.cells[g].size())
    throw std::invalid_argument("chain length does not match complex");
  Chain out(g - 1, sc.cells[g - 1].size());
  for (int i = 0; i < static_cast<int>(sc.cells[g].size()); ++i) {
    double c = ch.coeffs[i];
    if (c == 0.0) continue;
    const auto& t = sc.cells[g][i];
    for (int drop = 0; drop <= g; ++drop) {
      std::vector<int> face;
      for (int j = 0; j <= g; ++j)
        if (j != drop) face.push_back(t[j]);
      int derived_sign = (drop % 2 == 0) ? 1 : -1;
      int face_parity = SimplicialComplex::sort_parity(face);
      auto it = sc.lookup[g - 1].find(face);
      if (it == sc.lookup[g - 1].end())
        throw schema_error("boundary face missing from complex");
      auto [idx, stored_parity] = it->second;
      out.coeffs[idx] += c * derived_sign * face_parity * stored_parity;
    }
  }
  return out;
}

}  // namespace ck
