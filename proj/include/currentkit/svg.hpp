#pragma once
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "currentkit/flat_norm.hpp"
#include "currentkit/flatgan.hpp"
#include "currentkit/simplicial.hpp"

namespace ck {

// Minimal SVG writer. Maps a data-space box into an 800 x 800 viewBox with a
// fixed margin, y pointing up; the transform is recorded as an XML comment so
// plots can be read back quantitatively.
class SvgCanvas {
 public:
  SvgCanvas(double x0, double y0, double x1, double y1) {
    double w = std::max(x1 - x0, 1e-9), h = std::max(y1 - y0, 1e-9);
    double span = std::max(w, h);
    scale_ = (size_ - 2.0 * margin_) / span;
    // center the box
    ox_ = margin_ + (size_ - 2.0 * margin_ - scale_ * w) / 2.0 - scale_ * x0;
    oy_ = size_ - margin_ - (size_ - 2.0 * margin_ - scale_ * h) / 2.0 + scale_ * y0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<!-- data to screen: sx = %.9g*x %+.9g; sy = %+.9g %-.9g*y -->\n", scale_, ox_,
                  oy_, scale_);
    body_ += buf;
  }

  double px(double x) const { return ox_ + scale_ * x; }
  double py(double y) const { return oy_ - scale_ * y; }

  void line(double ax, double ay, double bx, double by, const std::string& stroke, double width,
            double opacity = 1.0) {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                  "stroke-width=\"%.2f\" stroke-opacity=\"%.3f\"/>\n",
                  px(ax), py(ay), px(bx), py(by), stroke.c_str(), width, opacity);
    body_ += buf;
  }

  void circle(double x, double y, double r_px, const std::string& fill, double opacity = 1.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" "
                  "fill-opacity=\"%.3f\"/>\n",
                  px(x), py(y), r_px, fill.c_str(), opacity);
    body_ += buf;
  }

  void polygon(const std::vector<std::array<double, 2>>& pts, const std::string& fill,
               double opacity) {
    body_ += "<polygon points=\"";
    char buf[64];
    for (auto& p : pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(p[0]), py(p[1]));
      body_ += buf;
    }
    char tail[128];
    std::snprintf(tail, sizeof tail, "\" fill=\"%s\" fill-opacity=\"%.3f\"/>\n", fill.c_str(),
                  opacity);
    body_ += tail;
  }

  void polyline(const Mat& pts, const std::string& stroke, double width, double opacity = 1.0) {
    body_ += "<polyline points=\"";
    char buf[64];
    for (int j = 0; j < pts.cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(pts(0, j)), py(pts(1, j)));
      body_ += buf;
    }
    char tail[160];
    std::snprintf(tail, sizeof tail,
                  "\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\" "
                  "stroke-opacity=\"%.3f\"/>\n",
                  stroke.c_str(), width, opacity);
    body_ += tail;
  }

  void text(double x, double y, const std::string& s) {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"14\">",
                  px(x), py(y));
    body_ += buf;
    for (char c : s) {
      if (c == '<')
        body_ += "&lt;";
      else if (c == '>')
        body_ += "&gt;";
      else if (c == '&')
        body_ += "&amp;";
      else
        body_ += c;
    }
    body_ += "</text>\n";
  }

  void raw(const std::string& s) { body_ += s; }

  void label(const std::string& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "<text x=\"12\" y=\"%.0f\" font-family=\"monospace\" "
                                   "font-size=\"14\">",
                  20.0 + 18.0 * labels_++);
    body_ += buf;
    for (char c : s) {
      if (c == '<')
        body_ += "&lt;";
      else if (c == '>')
        body_ += "&gt;";
      else if (c == '&')
        body_ += "&amp;";
      else
        body_ += c;
    }
    body_ += "</text>\n";
  }

  std::string str() const {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" "
        "width=\"800\" height=\"800\">\n"
        "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
  }

 private:
  double size_ = 800.0, margin_ = 40.0;
  double scale_ = 1.0, ox_ = 0.0, oy_ = 0.0;
  std::string body_;
  int labels_ = 0;
};

// Transport decomposition of a weighted point current: atoms as signed dots
// (area ~ |w|), transport segments in blue (width ~ flow), residual mass as
// red rings. Only the first two coordinates are drawn.
inline std::string flat_norm_witness_svg(const PointFlatNorm& r) {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  if (!r.points.empty()) {
    x0 = x1 = r.points[0][0];
    y0 = y1 = r.points[0].size() > 1 ? r.points[0][1] : 0.0;
    for (auto& p : r.points) {
      double px = p[0], py = p.size() > 1 ? p[1] : 0.0;
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
    }
  }
  SvgCanvas c(x0, y0, x1, y1);
  double wmax = 1e-12;
  for (double w : r.weights) wmax = std::max(wmax, std::fabs(w));
  double fmax = 1e-12;
  for (double f : r.segment_flow) fmax = std::max(fmax, std::fabs(f));

  auto coord = [&](int i, int axis) {
    return axis < int(r.points[i].size()) ? r.points[i][axis] : 0.0;
  };
  for (size_t s = 0; s < r.segments.size(); ++s) {
    int i = r.segments[s][0], j = r.segments[s][1];
    double w = 1.0 + 5.0 * std::fabs(r.segment_flow[s]) / fmax;
    c.line(coord(i, 0), coord(i, 1), coord(j, 0), coord(j, 1), "#3366cc", w, 0.8);
  }
  for (size_t i = 0; i < r.points.size(); ++i) {
    double rad = 3.0 + 7.0 * std::sqrt(std::fabs(r.weights[i]) / wmax);
    c.circle(coord(int(i), 0), coord(int(i), 1), rad,
             r.weights[i] >= 0 ? "#222222" : "#cc7722", 0.85);
  }
  for (size_t i = 0; i < r.points.size(); ++i) {
    if (std::fabs(r.residual_weight[i]) > 1e-12) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"#cc2222\" "
                    "stroke-width=\"2\"/>\n",
                    c.px(coord(int(i), 0)), c.py(coord(int(i), 1)),
                    6.0 + 7.0 * std::sqrt(std::fabs(r.residual_weight[i]) / wmax));
      c.raw(buf);
    }
  }
  char head[160];
  std::snprintf(head, sizeof head, "value %.6g  lambda %.3g  gap %.1e", r.value, r.lambda,
                r.stats.duality_gap);
  c.label(head);
  c.label("blue: transport, red ring: residual at rate lambda");
  return c.str();
}

// Edge chain a drawn with width ~ |a_e| and the filled 2-chain b shaded.
inline std::string simplicial_witness_svg(const SimplicialComplex& sc, const Chain& t,
                                          const SimplicialFlatNorm& r) {
  double x0 = sc.vertices[0][0], x1 = x0, y0 = sc.vertices[0][1], y1 = y0;
  for (auto& v : sc.vertices) {
    x0 = std::min(x0, v[0]);
    x1 = std::max(x1, v[0]);
    y0 = std::min(y0, v[1]);
    y1 = std::max(y1, v[1]);
  }
  SvgCanvas c(x0, y0, x1, y1);

  double bmax = 1e-12;
  for (double q : r.b.coeffs) bmax = std::max(bmax, std::fabs(q));
  for (size_t f = 0; f < sc.cells[2].size(); ++f) {
    double q = r.b.coeffs[f];
    if (std::fabs(q) < 1e-12) continue;
    auto& tri = sc.cells[2][f];
    std::vector<std::array<double, 2>> pts;
    for (int v : tri) pts.push_back({sc.vertices[v][0], sc.vertices[v][1]});
    c.polygon(pts, q > 0 ? "#88bb88" : "#bb8888", 0.25 + 0.5 * std::fabs(q) / bmax);
  }

  double amax = 1e-12;
  for (double q : r.a.coeffs) amax = std::max(amax, std::fabs(q));
  for (size_t e = 0; e < sc.cells[1].size(); ++e) {
    double q = r.a.coeffs[e];
    double tq = t.coeffs[e];
    auto& ed = sc.cells[1][e];
    double ax = sc.vertices[ed[0]][0], ay = sc.vertices[ed[0]][1];
    double bx = sc.vertices[ed[1]][0], by = sc.vertices[ed[1]][1];
    if (std::fabs(tq) > 1e-12) c.line(ax, ay, bx, by, "#bbbbbb", 6.0, 0.5);
    if (std::fabs(q) > 1e-12)
      c.line(ax, ay, bx, by, q > 0 ? "#3366cc" : "#cc7722", 1.0 + 4.0 * std::fabs(q) / amax, 0.9);
  }
  char head[160];
  std::snprintf(head, sizeof head, "value %.6g  lambda %.3g  gap %.1e", r.value, r.lambda,
                r.stats.duality_gap);
  c.label(head);
  c.label("grey: input chain, blue/orange: signed residual a, shaded: fill b");
  return c.str();
}

// One training snapshot: data atoms, generated samples, latent walk.
inline std::string training_panel_svg(const DataCurrentSpec& data, const Mat& samples,
                                      const Mat& walk, const std::string& title) {
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  auto grow = [&](const Mat& m) {
    for (int j = 0; j < m.cols; ++j) {
      x0 = std::min(x0, m(0, j));
      x1 = std::max(x1, m(0, j));
      y0 = std::min(y0, m(1, j));
      y1 = std::max(y1, m(1, j));
    }
  };
  grow(data.points);
  grow(samples);
  grow(walk);
  SvgCanvas c(x0, y0, x1, y1);
  if (walk.cols > 0) c.polyline(walk, "#3366cc", 2.0, 0.9);
  for (int j = 0; j < samples.cols; ++j) c.circle(samples(0, j), samples(1, j), 2.5, "#888888", 0.5);
  for (int j = 0; j < data.points.cols; ++j)
    c.circle(data.points(0, j), data.points(1, j), 6.0, "#cc2222", 0.9);
  c.label(title);
  c.label("red: data, grey: samples, blue: latent walk");
  return c.str();
}

}  // namespace ck
