#pragma once
#include <cmath>
#include <vector>

#include "currentkit/errors.hpp"
#include "currentkit/mat.hpp"

namespace ck {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double eps = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameter tensors. Throws on the
// first non-finite gradient so a blown-up run stops instead of poisoning the
// weights.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(std::vector<Mat*> params, const std::vector<Mat>& grads) {
    if (params.size() != grads.size())
      throw std::invalid_argument("adam: params and grads differ in count");
    if (m_.empty()) {
      for (const Mat* p : params) {
        m_.push_back(Mat(p->rows, p->cols));
        v_.push_back(Mat(p->rows, p->cols));
      }
    }
    ++t_;
    double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (size_t k = 0; k < params.size(); ++k) {
      Mat& p = *params[k];
      const Mat& g = grads[k];
      if (g.rows != p.rows || g.cols != p.cols)
        throw std::invalid_argument("adam: gradient shape mismatch");
      for (size_t i = 0; i < p.a.size(); ++i) {
        double gi = g.a[i];
        if (!std::isfinite(gi)) throw divergence_error("non-finite gradient in adam step");
        m_[k].a[i] = cfg_.beta1 * m_[k].a[i] + (1.0 - cfg_.beta1) * gi;
        v_[k].a[i] = cfg_.beta2 * v_[k].a[i] + (1.0 - cfg_.beta2) * gi * gi;
        double mh = m_[k].a[i] / c1;
        double vh = v_[k].a[i] / c2;
        p.a[i] -= cfg_.lr * mh / (std::sqrt(vh) + cfg_.eps);
      }
    }
  }

  int steps_taken() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  int t_ = 0;
  std::vector<Mat> m_, v_;
};

}  // namespace ck
