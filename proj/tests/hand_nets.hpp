#pragma once

// Hand-coded plain-double MLP forward/backward/Adam used as independent
// oracles against the tape-based implementations. Kept free of any tape
// types on purpose.

#include <cmath>
#include <vector>

#include "currentkit/adam.hpp"
#include "currentkit/mat.hpp"
#include "currentkit/nn.hpp"

namespace {

struct FwdCache {
  std::vector<ck::Mat> h;  // activations, h[0] = input, h[L] = output
  std::vector<ck::Mat> z;  // preactivations per layer
};

inline ck::Mat leaky_mask_of(const ck::Mat& z, double leak) {
  ck::Mat m(z.rows, z.cols);
  for (size_t i = 0; i < z.a.size(); ++i) m.a[i] = z.a[i] > 0.0 ? 1.0 : leak;
  return m;
}

inline FwdCache hand_forward(const ck::Mlp& net, const ck::Mat& x) {
  FwdCache c;
  c.h.push_back(x);
  int L = int(net.W.size());
  for (int l = 0; l < L; ++l) {
    ck::Mat z = matmul(net.W[l], c.h.back());
    for (int j = 0; j < z.cols; ++j)
      for (int i = 0; i < z.rows; ++i) z(i, j) += net.b[l](i, 0);
    c.z.push_back(z);
    if (l + 1 < L) {
      ck::Mat h(z.rows, z.cols);
      for (size_t i = 0; i < z.a.size(); ++i)
        h.a[i] = z.a[i] > 0.0 ? z.a[i] : net.spec.leak * z.a[i];
      c.h.push_back(h);
    } else {
      c.h.push_back(z);
    }
  }
  return c;
}

// accumulate dL/dW, dL/db given dL/d(output) columns
inline void hand_backprop(const ck::Mlp& net, const FwdCache& c, const ck::Mat& dout,
                          std::vector<ck::Mat>& dW, std::vector<ck::Mat>& db) {
  int L = int(net.W.size());
  ck::Mat delta = dout;
  for (int l = L - 1; l >= 0; --l) {
    ck::Mat gw = matmul_nt(delta, c.h[size_t(l)]);
    for (size_t i = 0; i < gw.a.size(); ++i) dW[size_t(l)].a[i] += gw.a[i];
    for (int i = 0; i < delta.rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < delta.cols; ++j) s += delta(i, j);
      db[size_t(l)](i, 0) += s;
    }
    if (l > 0) {
      delta = matmul_tn(net.W[size_t(l)], delta);
      ck::Mat m = leaky_mask_of(c.z[size_t(l - 1)], net.spec.leak);
      for (size_t i = 0; i < delta.a.size(); ++i) delta.a[i] *= m.a[i];
    }
  }
}

// input gradient of the scalar output at one column, with the per-layer
// deltas retained for the weight-gradient pass of the gradient penalty
struct InputGrad {
  ck::Mat g;                    // d(out)/d(input), in x 1
  std::vector<ck::Mat> delta;   // delta[l] is the adjoint entering layer l's weight
  std::vector<ck::Mat> mask;    // leaky slopes at each hidden preactivation
};

inline InputGrad hand_input_grad(const ck::Mlp& net, const FwdCache& c, int col) {
  int L = int(net.W.size());
  InputGrad out;
  out.delta.assign(size_t(L) + 1, ck::Mat());
  out.mask.assign(size_t(L), ck::Mat());
  ck::Mat d(1, 1);
  d(0, 0) = 1.0;
  out.delta[size_t(L)] = d;
  for (int l = L - 1; l >= 0; --l) {
    ck::Mat pre = matmul_tn(net.W[size_t(l)], out.delta[size_t(l + 1)]);
    if (l > 0) {
      ck::Mat zc(c.z[size_t(l - 1)].rows, 1);
      for (int i = 0; i < zc.rows; ++i) zc(i, 0) = c.z[size_t(l - 1)](i, col);
      out.mask[size_t(l)] = leaky_mask_of(zc, net.spec.leak);
      ck::Mat masked = pre;
      for (size_t i = 0; i < masked.a.size(); ++i) masked.a[i] *= out.mask[size_t(l)].a[i];
      out.delta[size_t(l)] = masked;
    } else {
      out.g = pre;
    }
  }
  return out;
}

// d(u0 . g)/dW with the activation masks held fixed, which is the exact
// derivative almost everywhere for piecewise-linear activations
inline void hand_gradpen_weights(const ck::Mlp& net, const InputGrad& ig, const ck::Mat& u0,
                                 std::vector<ck::Mat>& dW) {
  int L = int(net.W.size());
  ck::Mat u = u0;
  for (int l = 0; l < L; ++l) {
    ck::Mat gw = matmul_nt(ig.delta[size_t(l + 1)], u);
    for (size_t i = 0; i < gw.a.size(); ++i) dW[size_t(l)].a[i] += gw.a[i];
    if (l + 1 < L) {
      u = matmul(net.W[size_t(l)], u);
      for (size_t i = 0; i < u.a.size(); ++i) u.a[i] *= ig.mask[size_t(l + 1)].a[i];
    }
  }
}

struct HandAdam {
  std::vector<ck::Mat> m, v;
  int t = 0;
  void step(std::vector<ck::Mat*> params, const std::vector<ck::Mat>& grads,
            const ck::AdamConfig& cfg) {
    if (m.empty())
      for (auto* p : params) {
        m.push_back(ck::Mat(p->rows, p->cols));
        v.push_back(ck::Mat(p->rows, p->cols));
      }
    ++t;
    double c1 = 1.0 - std::pow(cfg.beta1, t), c2 = 1.0 - std::pow(cfg.beta2, t);
    for (size_t k = 0; k < params.size(); ++k)
      for (size_t i = 0; i < params[k]->a.size(); ++i) {
        double g = grads[k].a[i];
        m[k].a[i] = cfg.beta1 * m[k].a[i] + (1.0 - cfg.beta1) * g;
        v[k].a[i] = cfg.beta2 * v[k].a[i] + (1.0 - cfg.beta2) * g * g;
        params[k]->a[i] -= cfg.lr * (m[k].a[i] / c1) / (std::sqrt(v[k].a[i] / c2) + cfg.eps);
      }
  }
};

inline double max_param_diff(const ck::Mlp& a, const ck::Mlp& b) {
  double m = 0.0;
  for (size_t l = 0; l < a.W.size(); ++l) {
    for (size_t i = 0; i < a.W[l].a.size(); ++i)
      m = std::max(m, std::fabs(a.W[l].a[i] - b.W[l].a[i]));
    for (size_t i = 0; i < a.b[l].a.size(); ++i)
      m = std::max(m, std::fabs(a.b[l].a[i] - b.b[l].a[i]));
  }
  return m;
}

inline ck::Mlp linear_net(int in, int out, const ck::Mat& W) {
  ck::Mlp net;
  net.spec.widths = {in, out};
  net.spec.hidden = ck::Act::leaky_relu;
  net.spec.leak = 0.2;
  net.W.push_back(W);
  net.b.push_back(ck::Mat(out, 1));
  return net;
}

}  // namespace
