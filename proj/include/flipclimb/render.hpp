#pragma once

// Deterministic SVG figures: morphology frames, space-cloud projections and
// time-series plots. Coordinates are printed with fixed precision so equal
// inputs always give equal bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flipclimb/follower.hpp"
#include "flipclimb/geometry.hpp"
#include "flipclimb/model.hpp"
#include "flipclimb/planner.hpp"

namespace flipclimb::render {

namespace detail {

inline std::string num(double v, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s == "-0.00" || s == "-0") s.erase(0, 1);
  return s;
}

inline std::string svgOpen(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w, 0) + "\" height=\"" + num(h, 0) +
         "\" viewBox=\"0 0 " + num(w, 0) + " " + num(h, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Mapper {
  double x0, x1, y0, y1;  // data window
  double left, top, width, height;  // pixel box

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + (y1 - y) / (y1 - y0) * height; }
};

/// Five evenly spaced tick values over [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
  std::vector<double> out;
  for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
  return out;
}

inline std::string tickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline void axes(std::ostringstream& os, const Mapper& m, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel) {
  os << "<rect x=\"" << num(m.left) << "\" y=\"" << num(m.top) << "\" width=\"" << num(m.width) << "\" height=\""
     << num(m.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(m.x0, m.x1)) {
    os << "<line x1=\"" << num(m.px(t)) << "\" y1=\"" << num(m.top + m.height) << "\" x2=\"" << num(m.px(t))
       << "\" y2=\"" << num(m.top + m.height + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(m.px(t)) << "\" y=\"" << num(m.top + m.height + 18)
       << "\" text-anchor=\"middle\">" << tickLabel(t) << "</text>\n";
  }
  for (double t : ticks(m.y0, m.y1)) {
    os << "<line x1=\"" << num(m.left - 5) << "\" y1=\"" << num(m.py(t)) << "\" x2=\"" << num(m.left)
       << "\" y2=\"" << num(m.py(t)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(m.left - 8) << "\" y=\"" << num(m.py(t) + 4) << "\" text-anchor=\"end\">"
       << tickLabel(t) << "</text>\n";
  }
  os << "<text x=\"" << num(m.left + m.width / 2) << "\" y=\"" << num(m.top - 10)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<text x=\"" << num(m.left + m.width / 2) << "\" y=\"" << num(m.top + m.height + 36)
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text transform=\"translate(" << num(m.left - 48) << "," << num(m.top + m.height / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
}

inline std::pair<double, double> paddedRange(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1e-3, std::abs(lo) * 0.05);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace detail

// ---------------------------------------------------------------- frames

struct FrameStyle {
  double pixelsPerMetre = 1500.0;
  double xMin = -0.12, xMax = 0.48;
  double yMin = -0.03, yMax = 0.33;
};

/// One morphology frame: step, dilated boundary, skeleton, joints, and the
/// base tangent point when the base rests on the corner arc.
inline std::string morphologyFrame(const FullMorphology& m, const RobotDims& dims, const StepScene& scene,
                                   const std::string& caption = {}, const FrameStyle& st = {}) {
  using detail::num;
  const double W = (st.xMax - st.xMin) * st.pixelsPerMetre;
  const double H = (st.yMax - st.yMin) * st.pixelsPerMetre;
  const detail::Mapper map{st.xMin, st.xMax, st.yMin, st.yMax, 0, 0, W, H};
  auto pt = [&](Point2 p) { return num(map.px(p.x)) + "," + num(map.py(p.y)); };

  const double h = scene.height(), r = scene.radius();
  std::ostringstream os;
  os << detail::svgOpen(W, H);

  os << "<polygon class=\"step\" points=\"" << pt({st.xMin, st.yMin}) << ' ' << pt({st.xMax, st.yMin}) << ' '
     << pt({st.xMax, 0}) << ' ' << pt({0, 0}) << ' ' << pt({0, h}) << ' ' << pt({st.xMin, h})
     << "\" fill=\"#d9d9d9\" stroke=\"#555\"/>\n";

  const double rpx = r * st.pixelsPerMetre;
  os << "<path class=\"dilated\" d=\"M " << pt({st.xMax, r}) << " L " << pt({r, r}) << " L " << pt({r, h})
     << " A " << num(rpx) << ',' << num(rpx) << " 0 0 0 " << pt({0, h + r}) << " L " << pt({st.xMin, h + r})
     << "\" fill=\"none\" stroke=\"#4a7ab5\" stroke-dasharray=\"6,4\"/>\n";

  const auto p = forwardKinematics(dims, m);
  os << "<polyline class=\"skeleton\" points=\"" << pt(p.s3) << ' ' << pt(p.s2) << ' ' << pt(p.s1) << ' '
     << pt(p.s0) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>\n";
  for (Point2 j : {p.s0, p.s1, p.s2, p.s3}) {
    os << "<circle class=\"wheel\" cx=\"" << num(map.px(j.x)) << "\" cy=\"" << num(map.py(j.y)) << "\" r=\""
       << num(rpx) << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<circle class=\"joint\" cx=\"" << num(map.px(j.x)) << "\" cy=\"" << num(map.py(j.y))
       << "\" r=\"5\" fill=\"orange\"/>\n";
  }
  if (m.l_t) {
    const Point2 dir = (1.0 / dims.l) * (p.s1 - p.s2);
    const Point2 tp = p.s2 + *m.l_t * dir;
    os << "<circle class=\"tangent\" cx=\"" << num(map.px(tp.x)) << "\" cy=\"" << num(map.py(tp.y))
       << "\" r=\"5\" fill=\"red\"/>\n";
  }

  char label[160];
  std::snprintf(label, sizeof label, "d=%.3f m  a=%.3f m  alpha=%.1f deg  beta=%.1f deg  theta=%.1f deg",
                m.triplet.d, m.triplet.a, m.triplet.alpha * 180.0 / std::numbers::pi,
                m.beta * 180.0 / std::numbers::pi, m.theta * 180.0 / std::numbers::pi);
  os << "<text x=\"10\" y=\"20\">" << (caption.empty() ? "" : caption + "  ") << label << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

inline std::string frameName(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03zu.svg", index);
  return buf;
}

// ---------------------------------------------------------------- plots

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x, y;
  bool dashed = false;
};

inline std::string linePlot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                            const std::vector<Series>& series) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
    for (double v : s.y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
  }
  if (xlo > xhi) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const auto [x0, x1] = detail::paddedRange(xlo, xhi);
  const auto [y0, y1] = detail::paddedRange(ylo, yhi);
  const detail::Mapper map{x0, x1, y0, y1, 80, 40, 560, 320};

  std::ostringstream os;
  os << detail::svgOpen(720, 440);
  detail::axes(os, map, title, xlabel, ylabel);
  double legendY = map.top + 14;
  for (const auto& s : series) {
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"5,3\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << (i ? " " : "") << detail::num(map.px(s.x[i])) << ',' << detail::num(map.py(s.y[i]));
    os << "\"/>\n";
    os << "<text x=\"" << detail::num(map.left + map.width - 8) << "\" y=\"" << detail::num(legendY)
       << "\" text-anchor=\"end\" fill=\"" << s.color << "\">" << s.name << "</text>\n";
    legendY += 16;
  }
  os << "</svg>\n";
  return os.str();
}

/// Scatter of (x, y) pairs; points falling on the same pixel are drawn once.
inline std::string scatterPlot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                               const std::vector<std::pair<double, double>>& pts) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& [x, y] : pts) {
    xlo = std::min(xlo, x), xhi = std::max(xhi, x);
    ylo = std::min(ylo, y), yhi = std::max(yhi, y);
  }
  if (pts.empty()) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const auto [x0, x1] = detail::paddedRange(xlo, xhi);
  const auto [y0, y1] = detail::paddedRange(ylo, yhi);
  const detail::Mapper map{x0, x1, y0, y1, 80, 40, 560, 320};

  std::set<std::pair<long, long>> pixels;
  for (const auto& [x, y] : pts)
    pixels.emplace(std::lround(map.px(x) * 2.0), std::lround(map.py(y) * 2.0));

  std::ostringstream os;
  os << detail::svgOpen(720, 440);
  detail::axes(os, map, title, xlabel, ylabel);
  os << "<g class=\"points\" fill=\"#1f77b4\">\n";
  for (const auto& [px, py] : pixels)
    os << "<rect x=\"" << detail::num(px / 2.0 - 0.5) << "\" y=\"" << detail::num(py / 2.0 - 0.5)
       << "\" width=\"1\" height=\"1\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

inline std::string spaceProjectionDA(const SpaceCloud& cloud) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(cloud.points.size());
  for (const auto& p : cloud.points) pts.emplace_back(p.d, p.a);
  return scatterPlot("Feasible morphologies, (d, a) projection", "d [m]", "a [m]", pts);
}

inline std::string spaceProjectionDAlpha(const SpaceCloud& cloud) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(cloud.points.size());
  for (const auto& p : cloud.points) pts.emplace_back(p.d, p.alpha * 180.0 / std::numbers::pi);
  return scatterPlot("Feasible morphologies, (d, alpha) projection", "d [m]", "alpha [deg]", pts);
}

/// Target vs simulated series of one follow-log quantity; angles in degrees.
inline std::string followPlot(const FollowLog& log, const std::string& quantity) {
  Series target{quantity + " target", "#d62728", {}, {}, true};
  Series sim{quantity + " simulated", "#1f77b4", {}, {}, false};
  const double k = quantity == "d" ? 1.0 : 180.0 / std::numbers::pi;
  for (const auto& r : log.records) {
    double t = 0, s = 0;
    if (quantity == "alpha") t = r.alpha_t, s = r.alpha_s;
    else if (quantity == "beta") t = r.beta_t, s = r.beta_s;
    else if (quantity == "d") t = r.d_t, s = r.d_s;
    else if (quantity == "theta") t = r.theta_t, s = r.theta_s;
    else throw std::invalid_argument("followPlot: unknown quantity " + quantity);
    target.x.push_back(r.t);
    target.y.push_back(k * t);
    sim.x.push_back(r.t);
    sim.y.push_back(k * s);
  }
  const std::string unit = quantity == "d" ? " [m]" : " [deg]";
  return linePlot(quantity + " vs t", "t [substep]", quantity + unit, {target, sim});
}

inline std::string centerPlot(const FollowLog& log) {
  Series x{"x", "#2ca02c", {}, {}, false};
  Series z{"z", "#9467bd", {}, {}, false};
  for (const auto& r : log.records) {
    x.x.push_back(r.t);
    x.y.push_back(r.cx);
    z.x.push_back(r.t);
    z.y.push_back(r.cz);
  }
  return linePlot("Robot centre", "t [substep]", "position [m]", {x, z});
}

}  // namespace flipclimb::render
