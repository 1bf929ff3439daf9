#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "currentkit/errors.hpp"
#include "currentkit/rng.hpp"

namespace ck {

// Uncapacitated min-cost flow: minimize sum c_a f_a over f >= 0 with
// out(i) - in(i) = supply(i). Supplies must balance.
struct McfProblem {
  int n = 0;
  std::vector<double> supply;
  std::vector<int> tail, head;
  std::vector<double> cost;

  int add_arc(int t, int h, double c) {
    tail.push_back(t);
    head.push_back(h);
    cost.push_back(c);
    return static_cast<int>(cost.size()) - 1;
  }
};

struct McfResult {
  double objective = 0.0;
  std::vector<double> flow;       // per arc
  std::vector<double> potential;  // per node; rc_a = c_a - pi[tail] + pi[head] >= 0
  int iterations = 0;
};

// Primal network simplex on a spanning tree basis. The tree is rooted at an
// artificial node with big-cost arcs so any balanced instance starts
// feasible; supplies get a deterministic zero-sum perturbation to keep
// degenerate pivot chains from forming, and the final tree is re-solved
// against the exact supplies before reporting.
class NetworkSimplex {
 public:
  explicit NetworkSimplex(const McfProblem& p) : n_(p.n), m_(static_cast<int>(p.cost.size())) {
    double bsum = 0.0, bscale = 1.0;
    for (double b : p.supply) {
      bsum += b;
      bscale = std::max(bscale, std::fabs(b));
    }
    if (std::fabs(bsum) > 1e-9 * bscale)
      throw solver_error("min-cost flow supplies do not balance");

    root_ = n_;
    tail_ = p.tail;
    head_ = p.head;
    cost_ = p.cost;
    double cscale = 1.0;
    for (double c : cost_) cscale = std::max(cscale, std::fabs(c));
    big_ = 1.0 + cscale * (n_ + 1);

    // perturbed supplies, mean-centered so the instance stays balanced
    supply_ = p.supply;
    exact_supply_ = p.supply;
    double mean = 0.0;
    std::vector<double> eps(n_);
    for (int i = 0; i < n_; ++i) {
      eps[i] = bscale * 1e-11 * (static_cast<double>(mix64(i + 1) % 4096) / 4096.0);
      mean += eps[i] / n_;
    }
    for (int i = 0; i < n_; ++i) supply_[i] += eps[i] - mean;

    // artificial arc per node, orientation by perturbed supply sign
    for (int i = 0; i < n_; ++i) {
      if (supply_[i] >= 0.0)
        art_.push_back(addArc(i, root_, big_));
      else
        art_.push_back(addArc(root_, i, big_));
    }

    flow_.assign(cost_.size(), 0.0);
    in_tree_.assign(cost_.size(), 0);
    pred_.assign(n_ + 1, -1);
    for (int i = 0; i < n_; ++i) {
      pred_[i] = art_[i];
      in_tree_[art_[i]] = 1;
      flow_[art_[i]] = std::fabs(supply_[i]);
    }
    rebuild();
  }

  McfResult solve() {
    const double eps_rc = 1e-10 * big_ / (n_ + 1);
    const int block = std::max(64, m_ / 24);
    int64_t cap = 2000 + 200LL * (m_ + n_);
    int scan_from = 0;
    McfResult res;
    while (true) {
      if (res.iterations++ > cap) throw solver_error("network simplex pivot cap hit");
      int enter = findEntering(scan_from, block, eps_rc);
      if (enter < 0) break;
      pivot(enter);
    }
    finishExact();
    res.objective = 0.0;
    res.flow.assign(flow_.begin(), flow_.begin() + m_);
    for (int a = 0; a < m_; ++a) res.objective += flow_[a] * cost_[a];
    res.potential.assign(pi_.begin(), pi_.begin() + n_);
    return res;
  }

 private:
  int n_, m_, root_ = 0;
  double big_ = 0.0;
  std::vector<int> tail_, head_, art_;
  std::vector<double> cost_, flow_, supply_, exact_supply_, pi_;
  std::vector<char> in_tree_;
  std::vector<int> pred_, parent_, depth_, order_;

  int addArc(int t, int h, double c) {
    tail_.push_back(t);
    head_.push_back(h);
    cost_.push_back(c);
    return static_cast<int>(cost_.size()) - 1;
  }

  int other(int arc, int v) const { return tail_[arc] == v ? head_[arc] : tail_[arc]; }

  // Recompute parent/depth/potential from the pred structure, root first.
  void rebuild() {
    parent_.assign(n_ + 1, -1);
    depth_.assign(n_ + 1, 0);
    pi_.assign(n_ + 1, 0.0);
    order_.clear();
    order_.reserve(n_ + 1);
    std::vector<std::vector<int>> kids(n_ + 1);
    for (int v = 0; v <= n_; ++v) {
      if (v == root_) continue;
      parent_[v] = other(pred_[v], v);
      kids[parent_[v]].push_back(v);
    }
    order_.push_back(root_);
    for (size_t q = 0; q < order_.size(); ++q) {
      int v = order_[q];
      for (int w : kids[v]) {
        depth_[w] = depth_[v] + 1;
        int a = pred_[w];
        pi_[w] = (tail_[a] == w) ? cost_[a] + pi_[parent_[w]] : pi_[parent_[w]] - cost_[a];
        order_.push_back(w);
      }
    }
    if (order_.size() != static_cast<size_t>(n_ + 1))
      throw solver_error("spanning tree lost connectivity");
  }

  double rc(int a) const { return cost_[a] - pi_[tail_[a]] + pi_[head_[a]]; }

  int findEntering(int& scan_from, int block, double eps_rc) {
    int scanned = 0;
    int best = -1;
    double best_rc = -eps_rc;
    int a = scan_from;
    while (scanned < m_) {
      int stop = std::min(m_, a + block);
      for (; a < stop; ++a) {
        if (in_tree_[a]) continue;
        double r = rc(a);
        if (r < best_rc) {
          best_rc = r;
          best = a;
        }
      }
      scanned += block;
      if (a >= m_) a = 0;
      if (best >= 0) {
        scan_from = a;
        return best;
      }
    }
    return -1;
  }

  void pivot(int e) {
    int u = tail_[e], v = head_[e];
    // locate the join of the two tree paths
    int x = u, y = v;
    while (x != y) {
      if (depth_[x] >= depth_[y])
        x = parent_[x];
      else
        y = parent_[y];
    }
    int join = x;

    // flow pushed around the cycle in the direction of e: find the limit
    double delta = std::numeric_limits<double>::infinity();
    int leave = -1, leave_side = 0;  // 1 = u side, 2 = v side
    for (int p = u; p != join; p = parent_[p]) {
      int a = pred_[p];
      // travel direction parent -> p on the return path through u
      bool with = head_[a] == p;
      if (!with && flow_[a] < delta) {
        delta = flow_[a];
        leave = a;
        leave_side = 1;
      }
    }
    for (int p = v; p != join; p = parent_[p]) {
      int a = pred_[p];
      // travel direction p -> parent on the way from v up to the join
      bool with = tail_[a] == p;
      if (!with && flow_[a] < delta) {
        delta = flow_[a];
        leave = a;
        leave_side = 2;
      }
    }
    if (leave < 0) throw solver_error("unbounded pivot cycle");

    // apply the flow change
    flow_[e] += delta;
    for (int p = u; p != join; p = parent_[p]) {
      int a = pred_[p];
      flow_[a] += (head_[a] == p) ? delta : -delta;
    }
    for (int p = v; p != join; p = parent_[p]) {
      int a = pred_[p];
      flow_[a] += (tail_[a] == p) ? delta : -delta;
    }

    // swap e in for the leaving arc: reverse pred pointers from the entering
    // endpoint on the cut side up to the node whose pred arc leaves
    int w = -1;
    for (int p = u; p != join; p = parent_[p])
      if (pred_[p] == leave) { w = p; break; }
    int start = u;
    if (w < 0) {
      for (int p = v; p != join; p = parent_[p])
        if (pred_[p] == leave) { w = p; break; }
      start = v;
    }
    (void)leave_side;
    if (w < 0) throw solver_error("leaving arc not on pivot cycle");

    in_tree_[leave] = 0;
    in_tree_[e] = 1;
    int node = start, carry = e;
    while (true) {
      int next_arc = pred_[node];
      pred_[node] = carry;
      if (node == w) break;
      carry = next_arc;
      node = parent_[node];
    }
    rebuild();
  }

  // Re-solve the tree flows against the exact (unperturbed) supplies.
  void finishExact() {
    std::vector<double> imbalance = exact_supply_;
    imbalance.push_back(0.0);
    for (double& f : flow_) f = 0.0;
    for (size_t q = order_.size(); q-- > 1;) {
      int v = order_[q];
      int a = pred_[v];
      // push v's surplus toward its parent
      double s = imbalance[v];
      flow_[a] = (tail_[a] == v) ? s : -s;
      imbalance[parent_[v]] += s;
      imbalance[v] = 0.0;
    }
    for (int a = 0; a < static_cast<int>(flow_.size()); ++a) {
      if (flow_[a] < -1e-7 * (1.0 + big_)) {
        // the exact instance disagrees with the perturbed basis beyond noise
        throw solver_error("negative basic flow after unperturbing");
      }
      if (flow_[a] < 0.0) flow_[a] = 0.0;
    }
    for (int i = 0; i < n_; ++i) {
      if (flow_[art_[i]] > 1e-7 * (1.0 + std::fabs(exact_supply_[i])))
        throw solver_error("artificial arc still carries flow; instance infeasible");
      flow_[art_[i]] = 0.0;
    }
  }
};

inline McfResult network_simplex(const McfProblem& p) { return NetworkSimplex(p).solve(); }

}  // namespace ck
