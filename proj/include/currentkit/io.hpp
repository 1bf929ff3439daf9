#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "currentkit/currents.hpp"
#include "currentkit/errors.hpp"
#include "currentkit/flat_norm.hpp"
#include "currentkit/forms.hpp"
#include "currentkit/kvector.hpp"
#include "currentkit/simplicial.hpp"
#include "json.hpp"

namespace ck {

using json = nlohmann::json;

// Multi-indices appear in JSON as 1-based comma-joined strings, "1,2"; the
// empty string is the k=0 index.
inline std::string index_key(const MultiIndex& I) {
  std::string s;
  for (size_t i = 0; i < I.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(I[i] + 1);
  }
  return s;
}

inline MultiIndex index_from_key(const std::string& key, int d, int k) {
  MultiIndex I;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(part);
    } catch (const std::exception&) {
      throw schema_error("bad multi-index component: " + part);
    }
    if (v < 1 || v > d) throw schema_error("multi-index component out of range: " + part);
    I.push_back(v - 1);
  }
  if (static_cast<int>(I.size()) != k) throw schema_error("multi-index grade mismatch: " + key);
  for (size_t i = 1; i < I.size(); ++i)
    if (I[i] <= I[i - 1]) throw schema_error("multi-index must be strictly increasing: " + key);
  return I;
}

template <class F>
auto with_schema_errors(const char* what, F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw schema_error(std::string(what) + ": " + e.what());
  }
}

template <class Basis>
json multivector_to_json(const Multivector<Basis>& v) {
  json coeffs = json::object();
  auto idx = all_indices(v.d, v.k);
  for (size_t r = 0; r < idx.size(); ++r)
    if (v.c[r] != 0.0) coeffs[index_key(idx[r])] = v.c[r];
  return json{{"d", v.d}, {"k", v.k}, {"coeffs", coeffs}};
}

template <class Basis>
Multivector<Basis> multivector_from_json(const json& j) {
  return with_schema_errors("multivector", [&] {
    int d = j.at("d").get<int>();
    int k = j.at("k").get<int>();
    Multivector<Basis> v(d, k);
    for (auto& [key, val] : j.at("coeffs").items()) {
      MultiIndex I = index_from_key(key, d, k);
      v.c[index_rank(d, I)] = val.template get<double>();
    }
    return v;
  });
}

inline json kvector_to_json(const KVector& v) { return multivector_to_json(v); }
inline KVector kvector_from_json(const json& j) { return multivector_from_json<VectorBasis>(j); }
inline json kcovector_to_json(const KCovector& v) { return multivector_to_json(v); }
inline KCovector kcovector_from_json(const json& j) {
  return multivector_from_json<CovectorBasis>(j);
}

inline json current_to_json(const DiscreteCurrent& T) {
  json atoms = json::array();
  for (const auto& a : T.atoms) {
    json frame = json::array();
    for (int c = 0; c < a.frame.k; ++c) frame.push_back(a.frame.cols.col(c));
    atoms.push_back(json{{"x", a.x}, {"w", a.w}, {"frame", frame}});
  }
  return json{{"d", T.d}, {"k", T.k}, {"atoms", atoms}};
}

inline DiscreteCurrent current_from_json(const json& j) {
  return with_schema_errors("current", [&] {
    int d = j.at("d").get<int>();
    int k = j.at("k").get<int>();
    DiscreteCurrent T(d, k);
    for (const auto& ja : j.at("atoms")) {
      auto x = ja.at("x").get<std::vector<double>>();
      double w = ja.at("w").get<double>();
      Frame f(d, k);
      if (k > 0) {
        const auto& jf = ja.at("frame");
        if (static_cast<int>(jf.size()) != k) throw schema_error("frame must have k columns");
        for (int c = 0; c < k; ++c) {
          auto col = jf[c].get<std::vector<double>>();
          if (static_cast<int>(col.size()) != d) throw schema_error("frame column length != d");
          f.cols.set_col(c, col);
        }
      }
      try {
        T.push_atom(x, w, f);
      } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
      }
    }
    return T;
  });
}

inline json polynomial_form_to_json(const PolynomialForm& w) {
  json terms = json::array();
  auto idx = all_indices(w.d, w.k);
  for (size_t r = 0; r < w.terms.size(); ++r) {
    if (w.terms[r].empty()) continue;
    json monos = json::array();
    for (const auto& m : w.terms[r]) monos.push_back(json{{"exps", m.exps}, {"coef", m.coef}});
    terms.push_back(json{{"index", index_key(idx[r])}, {"monomials", monos}});
  }
  return json{{"d", w.d}, {"k", w.k}, {"terms", terms}};
}

inline PolynomialForm polynomial_form_from_json(const json& j) {
  return with_schema_errors("polynomial form", [&] {
    int d = j.at("d").get<int>();
    int k = j.at("k").get<int>();
    PolynomialForm w(d, k);
    for (const auto& jt : j.at("terms")) {
      MultiIndex I = index_from_key(jt.at("index").get<std::string>(), d, k);
      int r = index_rank(d, I);
      for (const auto& jm : jt.at("monomials")) {
        Monomial m;
        m.exps = jm.at("exps").get<std::vector<int>>();
        if (static_cast<int>(m.exps.size()) != d)
          throw schema_error("monomial exponent list length != d");
        for (int e : m.exps)
          if (e < 0) throw schema_error("negative monomial exponent");
        m.coef = jm.at("coef").get<double>();
        w.terms[r].push_back(m);
      }
    }
    return w;
  });
}

// Triangulated region plus an edge chain, for the simplicial solver:
// {d, vertices, edges, triangles, chain}. Edge and triangle entries are
// 0-based vertex indices; chain coefficients follow the edge order given.
inline SimplicialComplex complex_from_json(const json& j) {
  return with_schema_errors("complex", [&] {
    SimplicialComplex sc;
    sc.d = j.at("d").get<int>();
    for (const auto& jv : j.at("vertices")) {
      auto v = jv.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != sc.d) throw schema_error("vertex length != d");
      sc.vertices.push_back(v);
    }
    int nv = static_cast<int>(sc.vertices.size());
    auto read_cells = [&](const char* name, int grade) {
      if (!j.contains(name)) return;
      for (const auto& jc : j.at(name)) {
        auto c = jc.get<std::vector<int>>();
        if (static_cast<int>(c.size()) != grade + 1)
          throw schema_error(std::string(name) + " entry has wrong vertex count");
        for (int v : c)
          if (v < 0 || v >= nv) throw schema_error("cell vertex index out of range");
        sc.cells[grade].push_back(c);
      }
    };
    for (int v = 0; v < nv; ++v) sc.cells[0].push_back({v});
    read_cells("edges", 1);
    read_cells("triangles", 2);
    sc.finalize();
    return sc;
  });
}

inline json point_flat_norm_to_json(const PointFlatNorm& r) {
  json segs = json::array();
  for (size_t s = 0; s < r.segments.size(); ++s)
    segs.push_back(json{{"from", r.segments[s][0]}, {"to", r.segments[s][1]},
                        {"flow", r.segment_flow[s]}});
  return json{{"value", r.value},
              {"lambda", r.lambda},
              {"points", r.points},
              {"weights", r.weights},
              {"residual_weight", r.residual_weight},
              {"transport", segs},
              {"potential", r.potential},
              {"duality_gap", r.stats.duality_gap},
              {"iterations", r.stats.iterations}};
}

inline json simplicial_flat_norm_to_json(const SimplicialFlatNorm& r) {
  return json{{"value", r.value},          {"lambda", r.lambda},
              {"a", r.a.coeffs},           {"b", r.b.coeffs},
              {"edge_potential", r.edge_potential},
              {"duality_gap", r.stats.duality_gap},
              {"iterations", r.stats.iterations}};
}

// ---- files ----

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path.string());
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::filesystem::path& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw schema_error("invalid json in " + path.string());
  return j;
}

// Raw little-endian doubles; this targets x86-64 where double layout already
// matches the file format.
inline void write_doubles(const std::filesystem::path& path, const std::vector<double>& v) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path.string());
  f.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::vector<double> read_doubles(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  auto bytes = static_cast<size_t>(f.tellg());
  if (bytes % sizeof(double) != 0) throw schema_error("weight file size not a multiple of 8");
  std::vector<double> v(bytes / sizeof(double));
  f.seekg(0);
  f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(bytes));
  if (!f) throw std::runtime_error("read failed: " + path.string());
  return v;
}

}  // namespace ck
