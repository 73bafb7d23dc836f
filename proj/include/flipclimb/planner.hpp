#pragma once

// Global climb planning: greedy descent over d columns of the feasible
// (d, a, alpha) set, then recovery of the full morphology per waypoint.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flipclimb/geometry.hpp"
#include "flipclimb/model.hpp"
#include "flipclimb/statecheck.hpp"

namespace flipclimb {

/// Raised when no feasible morphology exists where one is required.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct Path {
  std::vector<ConfigTriplet> points;
  PlannerParams params;
};

using MorphologyPath = std::vector<FullMorphology>;

struct SpaceCloud {
  std::vector<ConfigTriplet> points;
};

/// Weighted squared distance between triplets (no square root).
inline double tripletDistance(const ConfigTriplet& p1, const ConfigTriplet& p2, double omega_a) {
  const double dd = p1.d - p2.d;
  const double da = p1.a - p2.a;
  const double dal = p1.alpha - p2.alpha;
  return dd * dd + omega_a * da * da + dal * dal;
}

/// Number of grid columns d0 - k*step that stay strictly positive.
inline long columnCount(double d0, double step) {
  return static_cast<long>(std::floor(d0 / step - 1e-9)) + 1;
}

inline double columnD(double d0, double step, long k) { return d0 - static_cast<double>(k) * step; }

/// Closest triplet of a column; ties keep the earliest, i.e. smallest a then
/// smallest alpha.
inline const ConfigTriplet& closestTriplet(const std::vector<ConfigTriplet>& column,
                                           const ConfigTriplet& from, double omega_a) {
  const ConfigTriplet* best = &column.front();
  double bestDist = tripletDistance(*best, from, omega_a);
  for (const auto& t : column) {
    const double dist = tripletDistance(t, from, omega_a);
    if (dist < bestDist) {
      bestDist = dist;
      best = &t;
    }
  }
  return *best;
}

inline Path pathSearch(const PlannerParams& params, const RobotDims& dims, const StepScene& scene) {
  params.validate();
  dims.validate();
  if (!(params.d0 > params.delta_d)) throw std::invalid_argument("pathSearch: d0 must exceed delta_d");
  const auto cp = criticalDs(dims, scene.height());

  Path path{{}, params};
  ConfigTriplet current{params.d0, scene.radius(), params.alpha_ub};
  if (!alphaRange(current.d, current.a, dims, scene, params, cp))
    throw InfeasibleError("pathSearch: start configuration is infeasible");
  path.points.push_back(current);

  const long n = columnCount(params.d0, params.delta_d);
  for (long k = 1; k < n; ++k) {
    const double d = columnD(params.d0, params.delta_d, k);
    const auto column = findAAlpha(d, dims, scene, params, cp);
    if (column.empty())
      throw InfeasibleError("pathSearch: no feasible morphology at d = " + std::to_string(d));
    current = closestTriplet(column, current, params.omega_a);
    path.points.push_back(current);
  }
  return path;
}

namespace detail {

// Back flipper pitch relative to horizontal (negative points down) with S2
// lifted: S3 on the ground unless that cuts the arc, then tangent to it.
inline std::optional<double> liftedBackElevation(const RobotDims& dims, Point2 s2,
                                                 const StepScene& scene) {
  const double r = scene.radius();
  const double drop = (s2.y - r) / dims.b;
  if (drop <= 1.0) {
    const double e = -std::asin(drop);
    const Point2 s3 = s2 + dims.b * Point2{std::cos(e), std::sin(e)};
    if (segmentMinClearance(s2, s3, scene) >= -kContactTol) return e;
  }
  const Point2 v = scene.corner() - s2;
  const double dist = norm(v);
  if (dist < r) return std::nullopt;
  const double e = std::remainder(std::atan2(v.y, v.x) + std::asin(std::min(1.0, r / dist)),
                                  2.0 * std::numbers::pi);
  const Point2 s3 = s2 + dims.b * Point2{std::cos(e), std::sin(e)};
  if (segmentMinClearance(s2, s3, scene) < -1e-9) return std::nullopt;
  return e;
}

}  // namespace detail

/// Back flipper angle for a settled front half.
inline std::optional<double> recoverBeta(const RobotDims& dims, double d, double a, double theta,
                                         const StepScene& scene) {
  if (detail::onGround(a, scene.radius())) return theta;
  const auto e = detail::liftedBackElevation(dims, {d, a}, scene);
  if (!e) return std::nullopt;
  return *e + theta;
}

inline FullMorphology recoverWholeParameter(const ConfigTriplet& t, const RobotDims& dims,
                                            const StepScene& scene, const PlannerParams& params,
                                            const CriticalPoints& cp) {
  const auto range = alphaRange(t.d, t.a, dims, scene, params, cp);
  const bool inRange = range && t.alpha >= range->lo - kContactTol && t.alpha <= range->hi + kContactTol;
  if (!inRange) throw InfeasibleError("recoverWholeParameter: triplet is infeasible");

  const auto theta = settleTheta(t, dims, scene, cp);
  if (!theta) throw InfeasibleError("recoverWholeParameter: no settled pose");

  FullMorphology m;
  m.triplet = t;
  m.theta = *theta;
  const bool onEdge = !detail::onGround(t.a, scene.radius()) || t.d <= cp(8);
  if (onEdge) m.l_t = contact::baseTangency({t.d, t.a}, dims, scene)->l_t;
  const auto beta = recoverBeta(dims, t.d, t.a, m.theta, scene);
  if (!beta) throw InfeasibleError("recoverWholeParameter: back flipper cannot be placed");
  m.beta = *beta;
  return m;
}

inline FullMorphology recoverWholeParameter(const ConfigTriplet& t, const RobotDims& dims,
                                            const StepScene& scene,
                                            const PlannerParams& params = {}) {
  return recoverWholeParameter(t, dims, scene, params, criticalDs(dims, scene.height()));
}

inline MorphologyPath globalPlan(const PlannerParams& params, const RobotDims& dims,
                                 const StepScene& scene) {
  const Path path = pathSearch(params, dims, scene);
  const auto cp = criticalDs(dims, scene.height());
  MorphologyPath out;
  out.reserve(path.points.size());
  for (const auto& p : path.points) out.push_back(recoverWholeParameter(p, dims, scene, params, cp));
  return out;
}

/// Union of the feasible columns on a fine d grid.
inline SpaceCloud buildConfigSpace(const PlannerParams& params, const RobotDims& dims,
                                   const StepScene& scene, double d_fine) {
  if (!(d_fine > 0)) throw std::invalid_argument("buildConfigSpace: d_fine must be positive");
  const auto cp = criticalDs(dims, scene.height());
  SpaceCloud cloud;
  const long n = columnCount(params.d0, d_fine);
  for (long k = 0; k < n; ++k) {
    auto column = findAAlpha(columnD(params.d0, d_fine, k), dims, scene, params, cp);
    cloud.points.insert(cloud.points.end(), column.begin(), column.end());
  }
  return cloud;
}

}  // namespace flipclimb
