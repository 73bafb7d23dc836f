#pragma once

// State check: sort (d, a) pairs into the regions between critical distances,
// compute the admissible front flipper range for each, and enumerate the
// valid triplets of one d column.
//
// Contact rules every admissible morphology follows:
//  1. S1 may only leave its support while the front flipper rests tangent on
//     the corner arc (far from the step, d > dX1, the flipper may also stand
//     on the lower ground).
//  2. The base either has S2 on the ground or is tangent to the arc; from dX8
//     inwards it is always tangent and the flipper angle becomes a single
//     value (tangent to the arc while S1 is below the top plane, S0 on the top
//     plane otherwise).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flipclimb/geometry.hpp"
#include "flipclimb/model.hpp"

namespace flipclimb {

enum class RegionTag { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9, R10, Invalid };

inline std::string toString(RegionTag t) {
  if (t == RegionTag::Invalid) return "Invalid";
  return "R" + std::to_string(static_cast<int>(t));
}

struct Region {
  RegionTag tag = RegionTag::Invalid;
  std::array<bool, 9> atCritical{};  // d sits exactly on X1..X9

  bool onX(int i) const { return atCritical.at(static_cast<std::size_t>(i - 1)); }
  bool valid() const { return tag != RegionTag::Invalid; }
  int index() const { return valid() ? static_cast<int>(tag) : 0; }
};

struct AlphaRange {
  double lo = 0.0;
  double hi = 0.0;

  bool isPoint() const { return lo == hi; }
  bool contains(double alpha) const { return alpha >= lo && alpha <= hi; }
};

namespace contact {

inline constexpr double kHalfPi = std::numbers::pi / 2;

inline double wrapPi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

/// Unit forward direction for a segment with elevation psi (robot faces -x).
inline Point2 forward(double psi) { return {-std::cos(psi), std::sin(psi)}; }

/// Upward normal of a forward segment with elevation psi.
inline Point2 upNormal(double psi) { return {std::sin(psi), std::cos(psi)}; }

inline bool clear(Point2 a, Point2 b, const StepScene& scene, double tol = kContactTol) {
  return segmentMinClearance(a, b, scene) >= -tol;
}

struct Tangency {
  double psi;     // elevation of the tangent segment
  double along;   // distance from the start point to the tangent point
  Point2 point;   // tangent point on the arc
};

/// Forward segments from p that rest on top of the corner circle, with the
/// tangent point on the quarter arc and no farther than reach from p.
inline std::vector<Tangency> forwardTangents(Point2 p, double reach, const StepScene& scene,
                                             double tol = kContactTol) {
  const Point2 v = p - scene.corner();
  const double dist = norm(v);
  const double r = scene.radius();
  std::vector<Tangency> out;
  if (dist < r) return out;
  // v.x sin(psi) + v.y cos(psi) = r
  const double phi = std::atan2(v.y, v.x);
  const double s = std::asin(std::min(1.0, r / dist));
  for (double w : {s, std::numbers::pi - s}) {
    const double psi = wrapPi(w - phi);
    const Point2 q = scene.corner() + r * upNormal(psi);
    const double along = dot(q - p, forward(psi));
    if (along < -tol || along > reach + tol) continue;
    if (!StepScene::onQuarter(scene.arcAngle(q), tol)) continue;
    if (!out.empty() && std::abs(out.back().psi - psi) < 1e-15) continue;
    out.push_back({psi, std::max(along, 0.0), q});
  }
  return out;
}

struct BaseTangency {
  double theta;
  double l_t;
  Point2 point;
};

/// Base pitch that makes S1-S2 rest tangent on the arc with S2 = s2.
/// Requires S2 outside the dilated solid, the tangent point within the base
/// and a pitch in [0, pi/2).
inline std::optional<BaseTangency> baseTangency(Point2 s2, const RobotDims& dims,
                                                const StepScene& scene, double tol = kContactTol) {
  if (clearance(s2, scene) < -tol) return std::nullopt;
  const Point2 v = scene.corner() - s2;
  const double dist = norm(v);
  const double r = scene.radius();
  if (dist < r) return std::nullopt;
  double phi = std::atan2(v.y, v.x);
  if (phi < 0) phi += 2.0 * std::numbers::pi;
  const double psi = phi - std::asin(std::min(1.0, r / dist));
  double theta = std::numbers::pi - psi;
  if (theta < 0 && theta > -tol) theta = 0;
  if (theta < 0 || theta >= kHalfPi) return std::nullopt;
  const double lt = std::sqrt(std::max(0.0, dist * dist - r * r));
  if (lt > dims.l + tol) return std::nullopt;
  return BaseTangency{theta, std::min(lt, dims.l), scene.corner() + r * upNormal(theta)};
}

inline Point2 s1Of(const RobotDims& dims, double d, double a, double theta) {
  return Point2{d, a} + dims.l * forward(theta);
}

/// Whether base and front flipper clear the dilated boundary.
inline bool frontClear(const RobotDims& dims, double d, double a, double theta, double alpha,
                       const StepScene& scene, double tol = kContactTol) {
  const Point2 s2{d, a};
  const Point2 s1 = s1Of(dims, d, a, theta);
  const Point2 s0 = s1 + dims.f * forward(theta + alpha);
  return clear(s2, s1, scene, tol) && clear(s1, s0, scene, tol);
}

/// Base pitches (ascending, >= 0) at which the front flipper with relative
/// angle alpha rests tangent on the arc, S2 fixed at (d, a).
inline std::vector<double> flipperTangentThetas(const RobotDims& dims, double d, double a,
                                                double alpha, const StepScene& scene) {
  // d sin(psi) - k cos(psi) = r + l sin(alpha), psi = theta + alpha
  const double k = scene.height() - a;
  const double R = std::hypot(d, k);
  const double rhs = (scene.radius() + dims.l * std::sin(alpha)) / R;
  std::vector<double> out;
  if (std::abs(rhs) > 1.0) return out;
  const double delta = std::atan2(k, d);
  const double s = std::asin(rhs);
  for (double psi : {delta + s, delta + std::numbers::pi - s}) {
    const double theta = wrapPi(psi - alpha);
    if (theta < -kContactTol || theta >= kHalfPi) continue;
    const double th = std::max(theta, 0.0);
    const double ps = th + alpha;
    const Point2 s1 = s1Of(dims, d, a, th);
    const Point2 q = scene.corner() + scene.radius() * upNormal(ps);
    const double along = dot(q - s1, forward(ps));
    if (along < -kContactTol || along > dims.f + kContactTol) continue;
    if (!StepScene::onQuarter(scene.arcAngle(q))) continue;
    out.push_back(th);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Highest flipper angle at which the flipper of a flat robot (S2 on the
/// ground, theta = 0) touches the dilated boundary. Returns -pi when it never
/// touches.
inline double firstTouchAlpha(const RobotDims& dims, double d, const StepScene& scene) {
  const double r = scene.radius(), h = scene.height(), f = dims.f;
  const Point2 s1{d - dims.l, r};
  double best = -std::numbers::pi;
  auto alphaTo = [&](Point2 q) { return std::atan2(q.y - s1.y, -(q.x - s1.x)); };

  // Tip on the wall face.
  const double cw = (s1.x - r) / f;
  if (std::abs(cw) <= 1.0) {
    const double al = std::acos(cw);
    if (r + f * std::sin(al) <= h + kContactTol) best = std::max(best, al);
  }
  // Tip on the arc: circle(s1, f) meets circle(corner, r).
  const Point2 c = scene.corner();
  const double D = distance(s1, c);
  if (D <= f + r && D >= std::abs(f - r) && D > 0) {
    const double x = (f * f - r * r + D * D) / (2 * D);
    const double y = std::sqrt(std::max(0.0, f * f - x * x));
    const Point2 u = (1.0 / D) * (c - s1);
    const Point2 m = s1 + x * u;
    for (double sg : {1.0, -1.0}) {
      const Point2 q = m + (sg * y) * Point2{-u.y, u.x};
      if (StepScene::onQuarter(scene.arcAngle(q))) best = std::max(best, alphaTo(q));
    }
  }
  // Flipper resting tangent on the arc.
  for (const auto& t : forwardTangents(s1, f, scene)) best = std::max(best, t.psi);
  // Tip on the top plane.
  if (h < f) {
    for (double al : {std::asin(h / f), std::numbers::pi - std::asin(h / f)}) {
      if (s1.x - f * std::cos(al) <= kContactTol) best = std::max(best, al);
    }
  }
  return best;
}

/// Lowest flipper angle whose tangent point is the flipper tip itself, with S2
/// on the ground. This is where the flipper stops resting on the arc and its
/// tip would start sliding.
inline std::optional<double> tipTangentAlpha(const RobotDims& dims, double d,
                                             const StepScene& scene) {
  const double r = scene.radius(), k = scene.height() - r, l = dims.l;
  const double rho2 = dims.f * dims.f + r * r;
  // |S1(theta) - c|^2 = f^2 + r^2  =>  d cos(theta) + k sin(theta) = m
  const double m = (d * d + l * l + k * k - rho2) / (2 * l);
  const double R = std::hypot(d, k);
  if (std::abs(m) > R) return std::nullopt;
  const double eps = std::atan2(k, d);
  const double w = std::acos(m / R);
  std::optional<double> best;
  for (double theta : {eps - w, eps + w}) {
    if (theta < -kContactTol || theta >= kHalfPi) continue;
    theta = std::max(theta, 0.0);
    const Point2 s1 = s1Of(dims, d, r, theta);
    for (const auto& t : forwardTangents(s1, dims.f, scene, 1e-9)) {
      if (std::abs(t.along - dims.f) > 1e-7) continue;
      const double alpha = t.psi - theta;
      if (!frontClear(dims, d, r, theta, alpha, scene, 1e-9)) continue;
      if (!best || alpha < *best) best = alpha;
    }
  }
  return best;
}

/// Flipper lying flat on the top plane, tangent at the arc's top endpoint,
/// with S2 on the ground.
inline std::optional<double> flatOnTopAlpha(const RobotDims& dims, double d,
                                            const StepScene& scene) {
  const double h = scene.height();
  if (h >= dims.l) return std::nullopt;
  const double theta = std::asin(h / dims.l);
  const Point2 s1 = s1Of(dims, d, scene.radius(), theta);
  if (s1.x < -kContactTol || s1.x - dims.f > kContactTol) return std::nullopt;
  if (!clear({d, scene.radius()}, s1, scene)) return std::nullopt;
  return -theta;
}

/// Flipper raised until vertical along the wall face with S1 against the
/// wall.
inline std::optional<double> wallVerticalAlpha(const RobotDims& dims, double d,
                                               const StepScene& scene) {
  const double c = (d - scene.radius()) / dims.l;
  if (c < 0 || c > 1) return std::nullopt;
  return kHalfPi - std::acos(c);
}

/// S1 on the arc (lowest pitch) with the flipper tangent there.
inline std::optional<double> s1OnArcAlpha(const RobotDims& dims, double d,
                                          const StepScene& scene) {
  const double r = scene.radius();
  const Point2 s2{d, r};
  const Point2 c = scene.corner();
  const double D = distance(s2, c), l = dims.l;
  if (D > l + r || D < std::abs(l - r)) return std::nullopt;
  const double x = (l * l - r * r + D * D) / (2 * D);
  const double y = std::sqrt(std::max(0.0, l * l - x * x));
  const Point2 u = (1.0 / D) * (c - s2);
  const Point2 m = s2 + x * u;
  std::optional<double> bestTheta;
  for (double sg : {1.0, -1.0}) {
    const Point2 q = m + (sg * y) * Point2{-u.y, u.x};
    if (!StepScene::onQuarter(scene.arcAngle(q))) continue;
    const double theta = std::atan2(q.y - s2.y, -(q.x - s2.x));
    if (theta < 0) continue;
    if (!bestTheta || theta < *bestTheta) bestTheta = theta;
  }
  if (!bestTheta) return std::nullopt;
  const double phi = scene.arcAngle(s1Of(dims, d, r, *bestTheta));
  return (kHalfPi - phi) - *bestTheta;
}

/// Single admissible flipper angle once the base rests on the arc.
inline std::optional<double> edgeAlpha(const RobotDims& dims, const BaseTangency& bt, double d,
                                       double a, const StepScene& scene) {
  const Point2 s1 = s1Of(dims, d, a, bt.theta);
  const double top = scene.topLevel();
  std::optional<double> psi;
  if (s1.y < top) {
    // Front flipper rests on the arc too.
    // The base's own tangent lies behind S1 and is filtered out by reach,
    // unless S1 is the base tangent point, where continuing straight is the
    // only tangent.
    for (const auto& t : forwardTangents(s1, dims.f, scene)) {
      if (!psi || t.psi < *psi) psi = t.psi;
    }
  } else {
    // S0 on the top plane.
    const double s = (s1.y - top) / dims.f;
    if (s > 1.0) return std::nullopt;
    const double p = -std::asin(s);
    if (s1.x - dims.f * std::cos(p) > kContactTol) return std::nullopt;
    psi = p;
  }
  if (!psi) return std::nullopt;
  const double alpha = *psi - bt.theta;
  if (!clear(s1, s1 + dims.f * forward(*psi), scene)) return std::nullopt;
  return alpha;
}

}  // namespace contact

namespace detail {

inline bool nearlyEqual(double x, double y, double tol = kContactTol) {
  return std::abs(x - y) <= tol;
}

inline bool onGround(double a, double r) { return nearlyEqual(a, r); }

}  // namespace detail

/// Region of (d, a); critical distances are checked in ascending index order.
inline Region classifyRegion(double d, double a, const RobotDims& dims, const StepScene& scene,
                             const CriticalPoints& cp) {
  Region out;
  for (int i = 1; i <= 9; ++i) out.atCritical[static_cast<std::size_t>(i - 1)] = detail::nearlyEqual(d, cp(i));
  const double r = scene.radius();
  if (a < r - kContactTol || !(d > 0)) return out;

  if (detail::onGround(a, r)) {
    static constexpr std::array kFar{RegionTag::R1, RegionTag::R2, RegionTag::R3, RegionTag::R4,
                                     RegionTag::R5, RegionTag::R6, RegionTag::R7, RegionTag::R8};
    for (int i = 1; i <= 8; ++i) {
      if (d > cp(i)) {
        out.tag = kFar[static_cast<std::size_t>(i - 1)];
        return out;
      }
    }
  } else if (d > cp(8)) {
    return out;
  }

  const auto bt = contact::baseTangency({d, a}, dims, scene);
  if (!bt) return out;
  const Point2 s1 = contact::s1Of(dims, d, a, bt->theta);
  out.tag = s1.y < scene.topLevel() ? RegionTag::R9 : RegionTag::R10;
  return out;
}

inline Region classifyRegion(double d, double a, const RobotDims& dims, const StepScene& scene) {
  return classifyRegion(d, a, dims, scene, criticalDs(dims, scene.height()));
}

/// Admissible front flipper range for (d, a), or nothing when infeasible.
inline std::optional<AlphaRange> alphaRange(double d, double a, const RobotDims& dims,
                                            const StepScene& scene, const PlannerParams& params,
                                            const CriticalPoints& cp) {
  const Region region = classifyRegion(d, a, dims, scene, cp);
  double lo = params.alpha_lb, hi = params.alpha_ub;

  auto lowerFrom = [&](std::optional<double> v) {
    if (!v) return false;
    lo = std::max(lo, *v);
    return true;
  };

  switch (region.tag) {
    case RegionTag::Invalid:
      return std::nullopt;
    case RegionTag::R1:
      break;
    case RegionTag::R2:
    case RegionTag::R3:
      lo = std::max(lo, contact::firstTouchAlpha(dims, d, scene));
      break;
    case RegionTag::R4:
    case RegionTag::R5:
      if (!lowerFrom(contact::tipTangentAlpha(dims, d, scene)))
        lo = std::max(lo, contact::firstTouchAlpha(dims, d, scene));
      break;
    case RegionTag::R6:
      if (!lowerFrom(contact::flatOnTopAlpha(dims, d, scene))) return std::nullopt;
      break;
    case RegionTag::R7:
      if (!lowerFrom(contact::flatOnTopAlpha(dims, d, scene))) return std::nullopt;
      if (auto ub = contact::wallVerticalAlpha(dims, d, scene)) hi = std::min(hi, *ub);
      break;
    case RegionTag::R8:
      if (!lowerFrom(contact::flatOnTopAlpha(dims, d, scene))) return std::nullopt;
      if (auto ub = contact::s1OnArcAlpha(dims, d, scene)) hi = std::min(hi, *ub);
      break;
    case RegionTag::R9:
    case RegionTag::R10: {
      const auto bt = contact::baseTangency({d, a}, dims, scene);
      if (!bt) return std::nullopt;
      const auto al = contact::edgeAlpha(dims, *bt, d, a, scene);
      if (!al || *al < params.alpha_lb || *al > params.alpha_ub) return std::nullopt;
      return AlphaRange{*al, *al};
    }
  }
  if (lo > hi) return std::nullopt;
  return AlphaRange{lo, hi};
}

inline std::optional<AlphaRange> alphaRange(double d, double a, const RobotDims& dims,
                                            const StepScene& scene, const PlannerParams& params) {
  return alphaRange(d, a, dims, scene, params, criticalDs(dims, scene.height()));
}

/// Values lo, lo + step, ... with hi always included.
inline std::vector<double> anchoredGrid(double lo, double hi, double step) {
  std::vector<double> out;
  if (hi < lo) return out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  out.reserve(static_cast<std::size_t>(n) + 2);
  for (long j = 0; j <= n; ++j) out.push_back(lo + static_cast<double>(j) * step);
  if (out.back() < hi - 1e-12) out.push_back(hi);
  else out.back() = hi;
  return out;
}

/// S2 heights swept per column: r, r + delta_a, ..., h + r.
inline std::vector<double> heightGrid(const StepScene& scene, double delta_a) {
  return anchoredGrid(scene.radius(), scene.topLevel(), delta_a);
}

/// All valid triplets of one d column, ordered by a then alpha.
inline std::vector<ConfigTriplet> findAAlpha(double d, const RobotDims& dims, const StepScene& scene,
                                             const PlannerParams& params, const CriticalPoints& cp) {
  std::vector<ConfigTriplet> out;
  if (!(d > 0)) return out;
  for (double a : heightGrid(scene, params.delta_a)) {
    const auto range = alphaRange(d, a, dims, scene, params, cp);
    if (!range) continue;
    if (range->isPoint()) {
      out.push_back({d, a, range->lo});
      continue;
    }
    for (double al : anchoredGrid(range->lo, range->hi, params.delta_alpha)) out.push_back({d, a, al});
  }
  return out;
}

inline std::vector<ConfigTriplet> findAAlpha(double d, const RobotDims& dims, const StepScene& scene,
                                             const PlannerParams& params) {
  return findAAlpha(d, dims, scene, params, criticalDs(dims, scene.height()));
}

/// Base pitch taken by a valid triplet: resting flat, standing on the flipper
/// tip (far band only), the flipper resting on the arc, or the base resting on
/// the arc.
inline std::optional<double> settleTheta(const ConfigTriplet& t, const RobotDims& dims,
                                         const StepScene& scene, const CriticalPoints& cp) {
  const double r = scene.radius();
  if (!detail::onGround(t.a, r) || t.d <= cp(8)) {
    const auto bt = contact::baseTangency({t.d, t.a}, dims, scene);
    if (!bt) return std::nullopt;
    return bt->theta;
  }
  if (contact::frontClear(dims, t.d, r, 0.0, t.alpha, scene)) return 0.0;
  if (t.d > cp(1) && t.alpha < 0) {
    const double theta = std::atan2(-dims.f * std::sin(t.alpha), dims.l + dims.f * std::cos(t.alpha));
    if (contact::frontClear(dims, t.d, r, theta, t.alpha, scene)) return theta;
  }
  for (double theta : contact::flipperTangentThetas(dims, t.d, r, t.alpha, scene)) {
    if (contact::frontClear(dims, t.d, r, theta, t.alpha, scene, 1e-9)) return theta;
  }
  return std::nullopt;
}

}  // namespace flipclimb
