#pragma once
#include <cmath>
#include <string>
#include <vector>

#include "currentkit/ad.hpp"
#include "currentkit/errors.hpp"
#include "currentkit/mat.hpp"
#include "currentkit/rng.hpp"

namespace ck {

enum class Act { linear, leaky_relu, elu };

inline const char* act_name(Act a) {
  switch (a) {
    case Act::linear: return "linear";
    case Act::leaky_relu: return "leaky_relu";
    case Act::elu: return "elu";
  }
  return "linear";
}

inline Act act_from_name(const std::string& s) {
  if (s == "linear") return Act::linear;
  if (s == "leaky_relu") return Act::leaky_relu;
  if (s == "elu") return Act::elu;
  throw schema_error("unknown activation: " + s);
}

struct MlpSpec {
  std::vector<int> widths;  // input, hidden..., output
  Act hidden = Act::leaky_relu;
  double leak = 0.2;

  int layers() const { return static_cast<int>(widths.size()) - 1; }
};

// Fully connected net, values column-batched: x is (in x batch).
struct Mlp {
  MlpSpec spec;
  std::vector<Mat> W, b;

  static Mlp init(MlpSpec spec, uint64_t seed) {
    if (spec.widths.size() < 2) throw std::invalid_argument("mlp needs at least two widths");
    Mlp net;
    net.spec = std::move(spec);
    Rng rng(seed);
    for (int l = 0; l < net.spec.layers(); ++l) {
      int fan_in = net.spec.widths[l], fan_out = net.spec.widths[l + 1];
      double bound = 1.0 / std::sqrt(double(fan_in));
      Mat w(fan_out, fan_in);
      for (double& x : w.a) x = rng.uniform(-bound, bound);
      net.W.push_back(std::move(w));
      Mat bv(fan_out, 1);
      for (double& x : bv.a) x = rng.uniform(-bound, bound);
      net.b.push_back(std::move(bv));
    }
    return net;
  }

  int param_count() const {
    int n = 0;
    for (const auto& w : W) n += static_cast<int>(w.a.size());
    for (const auto& v : b) n += static_cast<int>(v.a.size());
    return n;
  }
};

// One flat buffer, weights first layer by layer, then biases.
inline std::vector<double> flatten(const Mlp& net) {
  std::vector<double> out;
  out.reserve(net.param_count());
  for (const auto& w : net.W) out.insert(out.end(), w.a.begin(), w.a.end());
  for (const auto& v : net.b) out.insert(out.end(), v.a.begin(), v.a.end());
  return out;
}

inline Mlp unflatten(MlpSpec spec, const std::vector<double>& buf) {
  Mlp net;
  net.spec = std::move(spec);
  size_t at = 0;
  for (int l = 0; l < net.spec.layers(); ++l) {
    Mat w(net.spec.widths[l + 1], net.spec.widths[l]);
    for (double& x : w.a) {
      if (at >= buf.size()) throw schema_error("weight buffer too short");
      x = buf[at++];
    }
    net.W.push_back(std::move(w));
  }
  for (int l = 0; l < net.spec.layers(); ++l) {
    Mat v(net.spec.widths[l + 1], 1);
    for (double& x : v.a) {
      if (at >= buf.size()) throw schema_error("weight buffer too short");
      x = buf[at++];
    }
    net.b.push_back(std::move(v));
  }
  if (at != buf.size()) throw schema_error("weight buffer too long");
  return net;
}

// Parameters registered on a tape so gradients can reach them.
struct MlpVars {
  std::vector<Var> W, b;

  std::vector<Var> all() const {
    std::vector<Var> v = W;
    v.insert(v.end(), b.begin(), b.end());
    return v;
  }
};

inline MlpVars push_params(Tape& t, const Mlp& net) {
  MlpVars vars;
  for (const auto& w : net.W) vars.W.push_back(t.input(w));
  for (const auto& v : net.b) vars.b.push_back(t.input(v));
  return vars;
}

inline Var mlp_apply(Tape& t, const MlpSpec& spec, const MlpVars& vars, Var x) {
  Var h = x;
  for (int l = 0; l < spec.layers(); ++l) {
    h = t.add_col(t.matmul(vars.W[l], h), vars.b[l]);
    if (l + 1 == spec.layers()) break;  // linear output layer
    switch (spec.hidden) {
      case Act::linear: break;
      case Act::leaky_relu: h = t.leaky(h, spec.leak); break;
      case Act::elu: h = t.elu(h); break;
    }
  }
  return h;
}

// Plain forward pass without a tape, for sampling and evaluation.
inline Mat mlp_forward(const Mlp& net, const Mat& x) {
  Mat h = x;
  for (int l = 0; l < net.spec.layers(); ++l) {
    Mat z = ck::matmul(net.W[l], h);
    for (int i = 0; i < z.rows; ++i)
      for (int j = 0; j < z.cols; ++j) z(i, j) += net.b[l](i, 0);
    if (l + 1 < net.spec.layers()) {
      switch (net.spec.hidden) {
        case Act::linear: break;
        case Act::leaky_relu:
          for (double& v : z.a)
            if (v < 0.0) v *= net.spec.leak;
          break;
        case Act::elu:
          for (double& v : z.a)
            if (v < 0.0) v = std::expm1(v);
          break;
      }
    }
    h = std::move(z);
  }
  return h;
}

}  // namespace ck
