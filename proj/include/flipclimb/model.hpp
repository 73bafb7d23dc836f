#pragma once

// Robot description, morphology types, planar forward kinematics and the
// table of critical distances that split the approach into regions.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "flipclimb/geometry.hpp"

namespace flipclimb {

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Skeleton segment lengths and wheel radius, metres.
struct RobotDims {
  double l = 0.145;  // base, S1-S2
  double f = 0.135;  // front flipper, S0-S1
  double b = 0.135;  // back flipper, S2-S3
  double r = 0.035;  // wheel radius

  void validate() const {
    if (!(l > 0 && f > 0 && b > 0 && r > 0))
      throw std::invalid_argument("RobotDims: all lengths must be strictly positive");
  }
};

/// Planner state: S2 position (d, a) and front flipper angle alpha.
struct ConfigTriplet {
  double d = 0.0;
  double a = 0.0;
  double alpha = 0.0;

  friend bool operator==(const ConfigTriplet&, const ConfigTriplet&) = default;
};

struct FullMorphology {
  ConfigTriplet triplet;
  double beta = 0.0;
  double theta = 0.0;
  std::optional<double> l_t;  // only while the base is tangent to the corner arc
};

struct SkeletonPose {
  Point2 s0, s1, s2, s3;
};

struct PlannerParams {
  double d0 = 0.4;
  double delta_d = 0.01;
  double delta_a = 0.001;
  double delta_alpha = 0.01;
  double alpha_lb = -std::numbers::pi / 2;
  double alpha_ub = deg2rad(56.0);
  double omega_a = 100.0;

  void validate() const {
    if (!(d0 > 0 && delta_d > 0 && delta_a > 0 && delta_alpha > 0))
      throw std::invalid_argument("PlannerParams: d0 and grid steps must be positive");
    if (!(alpha_lb < alpha_ub)) throw std::invalid_argument("PlannerParams: alpha_lb must be below alpha_ub");
    if (!(omega_a > 0)) throw std::invalid_argument("PlannerParams: omega_a must be positive");
  }
};

/// Joint positions. theta is the base pitch (nose up positive), alpha lifts
/// S0 above the base ray and beta lifts S3 above the backward base direction.
inline SkeletonPose forwardKinematics(const RobotDims& dims, double d, double a, double theta,
                                      double alpha, double beta) {
  SkeletonPose p;
  p.s2 = {d, a};
  p.s1 = p.s2 + dims.l * Point2{-std::cos(theta), std::sin(theta)};
  p.s0 = p.s1 + dims.f * Point2{-std::cos(theta + alpha), std::sin(theta + alpha)};
  p.s3 = p.s2 + dims.b * Point2{std::cos(beta - theta), std::sin(beta - theta)};
  return p;
}

inline SkeletonPose forwardKinematics(const RobotDims& dims, const FullMorphology& m) {
  return forwardKinematics(dims, m.triplet.d, m.triplet.a, m.theta, m.triplet.alpha, m.beta);
}

/// d-coordinates of the critical configurations X1..X9 for one step height.
struct CriticalPoints {
  std::array<double, 9> d{};
  // Set when a configuration cannot be built for this step and its value was
  // collapsed onto a neighbour.
  std::array<bool, 9> collapsed{};
  bool degenerate = false;  // dX3 < dX4: R4 is absorbed by R3

  /// 1-based access matching the X1..X9 naming.
  double operator()(int i) const { return d.at(static_cast<std::size_t>(i - 1)); }
};

/// Critical distances for the given robot and step height.
///
///  X1  front flipper can first reach the wall: f + r + l
///  X2  flat base, S0 on the arc's bottom endpoint (r, h)
///  X3  farthest d at which the flipper can touch the arc tangentially with its
///      tip; S1 may only lift closer than this
///  X4  tip tangency with S0, S1, S2 collinear (line S2-S0 tangent at S0)
///  X5  S0 on the arc's top endpoint with the flipper horizontal
///  X6  S1 can still reach the ground: r + l
///  X7  S2 on ground, S1 on the arc's bottom endpoint
///  X8  S2 on ground, base tangent to the arc exactly at S1
///  X9  S2 on ground, base tangent and S1 level with the top plane
inline CriticalPoints criticalDs(const RobotDims& dims, double h) {
  dims.validate();
  const double l = dims.l, f = dims.f, r = dims.r;
  if (!(h > r)) throw std::invalid_argument("criticalDs: step height must exceed wheel radius");
  const double k = h - r;
  const double rho = std::hypot(f, r);

  CriticalPoints cp;
  auto set = [&](int i, double v) { cp.d[static_cast<std::size_t>(i - 1)] = v; };
  auto collapse = [&](int i, double v) {
    set(i, v);
    cp.collapsed[static_cast<std::size_t>(i - 1)] = true;
  };

  set(1, f + r + l);
  set(6, r + l);

  if (f > k) set(2, l + r + std::sqrt(f * f - k * k));
  else collapse(2, cp(6));

  if (l + rho > k) set(3, std::sqrt((l + rho) * (l + rho) - k * k));
  else collapse(3, cp(6));

  if ((l + f) * (l + f) + r * r > k * k) set(4, std::sqrt((l + f) * (l + f) + r * r - k * k));
  else collapse(4, cp(6));

  if (l > h) set(5, f + std::sqrt(l * l - h * h));
  else collapse(5, cp(6));

  if (l > k) set(7, r + std::sqrt(l * l - k * k));
  else collapse(7, 0.0);

  if (l * l + r * r > k * k) set(8, std::sqrt(l * l + r * r - k * k));
  else collapse(8, 0.0);

  if (l > h) {
    const double s = h / l;
    const double c = std::sqrt(1.0 - s * s);
    set(9, (r + k * c) / s);
  } else {
    collapse(9, 0.0);
  }

  cp.degenerate = cp(3) < cp(4);
  return cp;
}

}  // namespace flipclimb
