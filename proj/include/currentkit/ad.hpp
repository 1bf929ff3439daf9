#pragma once
#include <cmath>
#include <stdexcept>
#include <vector>

#include "currentkit/mat.hpp"

namespace ck {

// Reverse-mode tape over whole matrices. Values are computed eagerly; the
// backward pass emits new nodes onto the same tape, so gradients are
// themselves differentiable and directional derivatives come from double
// backprop.
struct Var {
  int id = -1;
  bool ok() const { return id >= 0; }
};

enum class Op {
  input, constant,
  add, sub, mul, div, scale,
  matmul, matmul_nt, matmul_tn, transpose,
  add_col,                       // matrix plus column vector broadcast
  leaky, leaky_mask,             // leaky_mask: slope field, derivative zero a.e.
  elu, elu_slope, elu_exp,       // elu_exp is its own derivative on the active branch
  cosine, sine, sqrt_, abs_, sign_mask,
  sum_cols, tile_cols, sum_rows, tile_rows, sum_all, tile_all,
  slice_rows, pad_rows,
};

struct Node {
  Op op;
  int a = -1, b = -1;
  double s = 0.0;      // scale factor or activation slope
  int p0 = 0, p1 = 0;  // row offsets / tile counts
  Mat val;
};

class Tape {
 public:
  std::vector<Node> nodes;

  void clear() { nodes.clear(); }
  int size() const { return static_cast<int>(nodes.size()); }
  const Mat& val(Var v) const { return nodes[v.id].val; }

  Var input(Mat m) { return emit({Op::input, -1, -1, 0.0, 0, 0, std::move(m)}); }
  Var constant(Mat m) { return emit({Op::constant, -1, -1, 0.0, 0, 0, std::move(m)}); }
  Var scalar(double x) {
    Mat m(1, 1);
    m(0, 0) = x;
    return constant(m);
  }

  Var add(Var a, Var b) { return ew2(Op::add, a, b, [](double x, double y) { return x + y; }); }
  Var sub(Var a, Var b) { return ew2(Op::sub, a, b, [](double x, double y) { return x - y; }); }
  Var mul(Var a, Var b) { return ew2(Op::mul, a, b, [](double x, double y) { return x * y; }); }
  Var div(Var a, Var b) { return ew2(Op::div, a, b, [](double x, double y) { return x / y; }); }

  Var scale(Var a, double s) {
    Mat m = val(a);
    for (double& x : m.a) x *= s;
    return emit({Op::scale, a.id, -1, s, 0, 0, std::move(m)});
  }
  Var neg(Var a) { return scale(a, -1.0); }

  Var matmul(Var a, Var b) {
    return emit({Op::matmul, a.id, b.id, 0.0, 0, 0, ck::matmul(val(a), val(b))});
  }
  Var matmul_nt(Var a, Var b) {
    return emit({Op::matmul_nt, a.id, b.id, 0.0, 0, 0, ck::matmul_nt(val(a), val(b))});
  }
  Var matmul_tn(Var a, Var b) {
    return emit({Op::matmul_tn, a.id, b.id, 0.0, 0, 0, ck::matmul_tn(val(a), val(b))});
  }
  Var transpose(Var a) {
    return emit({Op::transpose, a.id, -1, 0.0, 0, 0, ck::transpose(val(a))});
  }

  Var add_col(Var a, Var col) {
    const Mat& A = val(a);
    const Mat& c = val(col);
    if (c.rows != A.rows || c.cols != 1) throw std::invalid_argument("add_col shape mismatch");
    Mat m = A;
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) m(i, j) += c(i, 0);
    return emit({Op::add_col, a.id, col.id, 0.0, 0, 0, std::move(m)});
  }

  Var leaky(Var a, double slope) {
    return ew1p(Op::leaky, a, slope, [=](double x) { return x > 0.0 ? x : slope * x; });
  }
  Var leaky_mask(Var a, double slope) {
    return ew1p(Op::leaky_mask, a, slope, [=](double x) { return x > 0.0 ? 1.0 : slope; });
  }
  Var relu(Var a) { return leaky(a, 0.0); }

  Var elu(Var a) {
    return ew1(Op::elu, a, [](double x) { return x > 0.0 ? x : std::expm1(x); });
  }
  Var elu_slope(Var a) {
    return ew1(Op::elu_slope, a, [](double x) { return x > 0.0 ? 1.0 : std::exp(x); });
  }
  Var elu_exp(Var a) {
    return ew1(Op::elu_exp, a, [](double x) { return x > 0.0 ? 0.0 : std::exp(x); });
  }

  Var cosine(Var a) { return ew1(Op::cosine, a, [](double x) { return std::cos(x); }); }
  Var sine(Var a) { return ew1(Op::sine, a, [](double x) { return std::sin(x); }); }
  Var sqrt(Var a) { return ew1(Op::sqrt_, a, [](double x) { return std::sqrt(x); }); }
  Var abs(Var a) { return ew1(Op::abs_, a, [](double x) { return std::fabs(x); }); }
  Var sign_mask(Var a) {
    return ew1(Op::sign_mask, a, [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
  }

  Var sum_cols(Var a) {
    const Mat& A = val(a);
    Mat m(A.rows, 1);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) m(i, 0) += A(i, j);
    return emit({Op::sum_cols, a.id, -1, 0.0, A.cols, 0, std::move(m)});
  }
  Var tile_cols(Var a, int n) {
    const Mat& A = val(a);
    if (A.cols != 1) throw std::invalid_argument("tile_cols wants a column");
    Mat m(A.rows, n);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = A(i, 0);
    return emit({Op::tile_cols, a.id, -1, 0.0, n, 0, std::move(m)});
  }
  Var sum_rows(Var a) {
    const Mat& A = val(a);
    Mat m(1, A.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) m(0, j) += A(i, j);
    return emit({Op::sum_rows, a.id, -1, 0.0, A.rows, 0, std::move(m)});
  }
  Var tile_rows(Var a, int n) {
    const Mat& A = val(a);
    if (A.rows != 1) throw std::invalid_argument("tile_rows wants a row");
    Mat m(n, A.cols);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < A.cols; ++j) m(i, j) = A(0, j);
    return emit({Op::tile_rows, a.id, -1, 0.0, n, 0, std::move(m)});
  }
  Var sum_all(Var a) {
    const Mat& A = val(a);
    Mat m(1, 1);
    for (double x : A.a) m(0, 0) += x;
    return emit({Op::sum_all, a.id, -1, 0.0, A.rows, A.cols, std::move(m)});
  }
  Var tile_all(Var a, int rows, int cols) {
    const Mat& A = val(a);
    if (A.rows != 1 || A.cols != 1) throw std::invalid_argument("tile_all wants a scalar");
    Mat m(rows, cols);
    for (double& x : m.a) x = A(0, 0);
    return emit({Op::tile_all, a.id, -1, 0.0, rows, cols, std::move(m)});
  }

  Var slice_rows(Var a, int r0, int rows) {
    const Mat& A = val(a);
    if (r0 < 0 || r0 + rows > A.rows) throw std::invalid_argument("slice_rows out of range");
    Mat m(rows, A.cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < A.cols; ++j) m(i, j) = A(r0 + i, j);
    return emit({Op::slice_rows, a.id, -1, 0.0, r0, A.rows, std::move(m)});
  }
  Var pad_rows(Var a, int r0, int total) {
    const Mat& A = val(a);
    if (r0 < 0 || r0 + A.rows > total) throw std::invalid_argument("pad_rows out of range");
    Mat m(total, A.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) m(r0 + i, j) = A(i, j);
    return emit({Op::pad_rows, a.id, -1, 0.0, r0, total, std::move(m)});
  }

  // composites
  Var vstack(Var a, Var b) {
    int ra = val(a).rows, rb = val(b).rows;
    return add(pad_rows(a, 0, ra + rb), pad_rows(b, ra, ra + rb));
  }
  Var dot(Var a, Var b) { return sum_all(mul(a, b)); }
  Var mean_all(Var a) {
    const Mat& A = val(a);
    return scale(sum_all(a), 1.0 / (static_cast<double>(A.rows) * A.cols));
  }

 private:
  Var emit(Node n) {
    nodes.push_back(std::move(n));
    return Var{static_cast<int>(nodes.size()) - 1};
  }
  template <class F>
  Var ew1(Op op, Var a, F f) {
    Mat m = val(a);
    for (double& x : m.a) x = f(x);
    return emit({op, a.id, -1, 0.0, 0, 0, std::move(m)});
  }
  template <class F>
  Var ew1p(Op op, Var a, double s, F f) {
    Mat m = val(a);
    for (double& x : m.a) x = f(x);
    return emit({op, a.id, -1, s, 0, 0, std::move(m)});
  }
  template <class F>
  Var ew2(Op op, Var a, Var b, F f) {
    const Mat& A = val(a);
    const Mat& B = val(b);
    if (A.rows != B.rows || A.cols != B.cols)
      throw std::invalid_argument("elementwise shape mismatch");
    Mat m = A;
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = f(m.a[i], B.a[i]);
    return emit({op, a.id, b.id, 0.0, 0, 0, std::move(m)});
  }
};

// Adjoints of root with respect to each listed leaf. Root must be 1x1.
// Contributions are emitted through the public op helpers, which keeps the
// result differentiable in turn.
inline std::vector<Var> grad(Tape& t, Var root, const std::vector<Var>& wrt) {
  if (t.val(root).rows != 1 || t.val(root).cols != 1)
    throw std::invalid_argument("grad expects a scalar root");
  int r = root.id;
  std::vector<int> adj(r + 1, -1);
  auto acc = [&](int node, Var contrib) {
    if (node < 0 || node > r) return;
    adj[node] = adj[node] < 0 ? contrib.id : t.add(Var{adj[node]}, contrib).id;
  };
  acc(r, t.scalar(1.0));

  for (int i = r; i >= 0; --i) {
    if (adj[i] < 0) continue;
    Var g{adj[i]};
    // copy the scalar fields: emissions below can reallocate the node array
    const Op op = t.nodes[i].op;
    const int na = t.nodes[i].a, nb = t.nodes[i].b;
    const double ns = t.nodes[i].s;
    const int p0 = t.nodes[i].p0, p1 = t.nodes[i].p1;
    Var a{na}, b{nb};
    switch (op) {
      case Op::input:
      case Op::constant:
        break;
      case Op::add:
        acc(na, g);
        acc(nb, g);
        break;
      case Op::sub:
        acc(na, g);
        acc(nb, t.neg(g));
        break;
      case Op::mul:
        acc(na, t.mul(g, b));
        acc(nb, t.mul(g, a));
        break;
      case Op::div:
        acc(na, t.div(g, b));
        acc(nb, t.neg(t.mul(g, t.div(Var{i}, b))));
        break;
      case Op::scale:
        acc(na, t.scale(g, ns));
        break;
      case Op::matmul:
        acc(na, t.matmul_nt(g, b));
        acc(nb, t.matmul_tn(a, g));
        break;
      case Op::matmul_nt:
        acc(na, t.matmul(g, b));
        acc(nb, t.matmul_tn(g, a));
        break;
      case Op::matmul_tn:
        acc(na, t.matmul_nt(b, g));
        acc(nb, t.matmul(a, g));
        break;
      case Op::transpose:
        acc(na, t.transpose(g));
        break;
      case Op::add_col:
        acc(na, g);
        acc(nb, t.sum_cols(g));
        break;
      case Op::leaky:
        acc(na, t.mul(g, t.leaky_mask(a, ns)));
        break;
      case Op::elu:
        acc(na, t.mul(g, t.elu_slope(a)));
        break;
      case Op::elu_slope:
        acc(na, t.mul(g, t.elu_exp(a)));
        break;
      case Op::elu_exp:
        acc(na, t.mul(g, t.elu_exp(a)));
        break;
      case Op::cosine:
        acc(na, t.neg(t.mul(g, t.sine(a))));
        break;
      case Op::sine:
        acc(na, t.mul(g, t.cosine(a)));
        break;
      case Op::sqrt_:
        acc(na, t.scale(t.div(g, Var{i}), 0.5));
        break;
      case Op::abs_:
        acc(na, t.mul(g, t.sign_mask(a)));
        break;
      case Op::leaky_mask:
      case Op::sign_mask:
        break;  // piecewise constant
      case Op::sum_cols:
        acc(na, t.tile_cols(g, p0));
        break;
      case Op::tile_cols:
        acc(na, t.sum_cols(g));
        break;
      case Op::sum_rows:
        acc(na, t.tile_rows(g, p0));
        break;
      case Op::tile_rows:
        acc(na, t.sum_rows(g));
        break;
      case Op::sum_all:
        acc(na, t.tile_all(g, p0, p1));
        break;
      case Op::tile_all:
        acc(na, t.sum_all(g));
        break;
      case Op::slice_rows:
        acc(na, t.pad_rows(g, p0, p1));
        break;
      case Op::pad_rows:
        acc(na, t.slice_rows(g, p0, t.val(a).rows));
        break;
    }
  }

  std::vector<Var> out;
  out.reserve(wrt.size());
  for (Var w : wrt) {
    if (w.id <= r && adj[w.id] >= 0) {
      out.push_back(Var{adj[w.id]});
    } else {
      const Mat& shape = t.val(w);
      out.push_back(t.constant(Mat(shape.rows, shape.cols)));
    }
  }
  return out;
}

// Directional derivative of y along v in the input x, by double backprop:
// differentiate <y, u> in x, then differentiate <d<y,u>/dx, v> back in u.
inline Var jvp(Tape& t, Var y, Var x, const Mat& v) {
  const Mat& Y = t.val(y);
  Var u = t.input(Mat(Y.rows, Y.cols));
  Var s = t.dot(y, u);
  Var gx = grad(t, s, {x})[0];
  Var s2 = t.dot(gx, t.constant(v));
  return grad(t, s2, {u})[0];
}

}  // namespace ck
