#pragma once

// Planar geometry of the skeleton-dilated step scene.
//
// Frame: the step wall is at x = 0, the undilated ground at y = 0 and the
// robot approaches from x > 0 facing -x. The solid obstacle is
//   O = {y <= 0} U {x <= 0, y <= h}
// and its offset by the wheel radius r is the boundary the skeleton rests on:
// lower ground y = r (x >= r), wall x = r (r <= y <= h), a quarter arc of
// radius r centred on the step corner (0, h), and the top plane y = h + r.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace flipclimb {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Contact tolerance for closed-form constructions.
inline constexpr double kContactTol = 1e-9;
/// Contact tolerance for anything produced by an iterative solve.
inline constexpr double kSolveTol = 1e-6;

class StepScene {
 public:
  StepScene(double height, double radius) : h_(height), r_(radius) {
    if (!(radius > 0.0) || !std::isfinite(height) || !(height > radius))
      throw std::invalid_argument("StepScene requires h > r > 0");
  }

  double height() const { return h_; }
  double radius() const { return r_; }
  Point2 corner() const { return {0.0, h_}; }
  double topLevel() const { return h_ + r_; }
  Point2 arcBottom() const { return {r_, h_}; }
  Point2 arcTop() const { return {0.0, h_ + r_}; }

  /// Angle of q about the corner, measured from +x.
  double arcAngle(Point2 q) const { return std::atan2(q.y - h_, q.x); }

  /// True when the angle about the corner lies on the quarter arc (endpoints
  /// inclusive).
  static bool onQuarter(double angle, double tol = kContactTol) {
    return angle >= -tol && angle <= std::numbers::pi / 2 + tol;
  }

 private:
  double h_;
  double r_;
};

namespace detail {

// Distance to the quadrant {x <= 0, y <= h}.
inline double quadrantDistance(Point2 p, double h) {
  if (p.y <= h) return std::max(p.x, 0.0);
  if (p.x <= 0.0) return p.y - h;
  return std::hypot(p.x, p.y - h);
}

inline bool insideQuadrant(Point2 p, double h) { return p.x <= 0.0 && p.y <= h; }

// Closest parameter t in [0, 1] on segment a-b to point q.
inline double closestParam(Point2 a, Point2 b, Point2 q) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
}

inline double pointSegmentDistance(Point2 q, Point2 a, Point2 b) {
  const double t = closestParam(a, b, q);
  return distance(q, a + t * (b - a));
}

// Whether segment a-b meets the quadrant {x <= 0, y <= h}.
inline bool segmentMeetsQuadrant(Point2 a, Point2 b, double h) {
  if (insideQuadrant(a, h) || insideQuadrant(b, h)) return true;
  // Crossing of the vertical boundary x = 0 below the corner.
  if ((a.x > 0.0) != (b.x > 0.0)) {
    const double t = a.x / (a.x - b.x);
    if (a.y + t * (b.y - a.y) <= h) return true;
  }
  // Crossing of the horizontal boundary y = h left of the corner.
  if ((a.y > h) != (b.y > h)) {
    const double t = (a.y - h) / (a.y - b.y);
    if (a.x + t * (b.x - a.x) <= 0.0) return true;
  }
  return false;
}

}  // namespace detail

/// Euclidean distance from p to the undilated solid.
inline double obstacleDistance(Point2 p, const StepScene& scene) {
  return std::min(std::max(p.y, 0.0), detail::quadrantDistance(p, scene.height()));
}

/// Signed clearance to the dilated boundary; 0 is contact, negative is
/// penetration.
inline double clearance(Point2 p, const StepScene& scene) {
  return obstacleDistance(p, scene) - scene.radius();
}

/// Exact minimum clearance over the segment a-b.
///
/// The obstacle distance is the minimum of two convex functions (distance to
/// the half-plane below the ground and to the step quadrant), so the segment
/// minimum is the smaller of the two per-function minima. Each has a closed
/// form: the half-plane term is minimised at an endpoint, and the quadrant
/// term at a segment endpoint or at the quadrant's only vertex.
inline double segmentMinClearance(Point2 a, Point2 b, const StepScene& scene) {
  const double h = scene.height();
  const double ground = std::max(std::min(a.y, b.y), 0.0);
  double quadrant = 0.0;
  if (!detail::segmentMeetsQuadrant(a, b, h)) {
    quadrant = std::min({detail::quadrantDistance(a, h), detail::quadrantDistance(b, h),
                         detail::pointSegmentDistance(scene.corner(), a, b)});
  }
  return std::min(ground, quadrant) - scene.radius();
}

struct ArcTangent {
  double lineAngle;  // direction of the tangent line in [0, pi)
  Point2 tangentPoint;
  double tangentDistance;
};

/// Tangent lines from p to the corner circle whose tangent point lies on the
/// quarter arc (endpoints inclusive).
inline std::vector<ArcTangent> tangentFromPoint(Point2 p, const StepScene& scene) {
  const Point2 c = scene.corner();
  const double r = scene.radius();
  const Point2 v = p - c;
  const double dist = norm(v);
  if (dist < r) throw std::invalid_argument("tangentFromPoint: point inside the corner circle");

  const double base = std::atan2(v.y, v.x);
  const double spread = std::acos(std::min(1.0, r / dist));
  std::vector<ArcTangent> out;
  for (double angle : {base + spread, base - spread}) {
    double a = std::remainder(angle, 2.0 * std::numbers::pi);
    if (!StepScene::onQuarter(a)) continue;
    a = std::clamp(a, 0.0, std::numbers::pi / 2);
    const Point2 q = c + r * Point2{std::cos(a), std::sin(a)};
    const Point2 dir = p - q;
    double line = std::atan2(dir.y, dir.x);
    if (norm(dir) == 0.0) line = a + std::numbers::pi / 2;  // p on the circle
    line = std::fmod(line + 2.0 * std::numbers::pi, std::numbers::pi);
    out.push_back({line, q, norm(dir)});
    if (spread == 0.0) break;
  }
  return out;
}

}  // namespace flipclimb
