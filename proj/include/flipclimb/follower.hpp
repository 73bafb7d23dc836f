#pragma once

// Path following: turn a morphology path into flipper/track commands and
// replay them open-loop through an idealised no-slip tracked plant.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "flipclimb/model.hpp"
#include "flipclimb/planner.hpp"
#include "flipclimb/statecheck.hpp"

namespace flipclimb {

struct TrackCommand {
  double delta_alpha = 0.0;
  double delta_beta = 0.0;
  double delta_m = 0.0;  // track travel, positive toward the step
};

struct PlantState {
  FullMorphology morphology;
  double odometer = 0.0;
  long time = 0;
};

struct FollowRecord {
  double t;
  double alpha_t, alpha_s;
  double beta_t, beta_s;
  double d_t, d_s;
  double theta_t, theta_s;
  double cx, cz;  // midpoint of S1 and S2
};

struct FollowLog {
  std::vector<FollowRecord> records;
  PlantState final;
};

struct FollowOptions {
  int substeps = 10;
  double slip = 0.0;  // fraction of commanded travel lost, in [0, 1]
};

inline std::vector<TrackCommand> commandsFromPath(const MorphologyPath& mp, const RobotDims& dims) {
  if (mp.size() < 2) throw std::invalid_argument("commandsFromPath: need at least two waypoints");
  const double step = mp[0].triplet.d - mp[1].triplet.d;
  if (!(step > 0)) throw std::invalid_argument("commandsFromPath: d must decrease along the path");

  std::vector<TrackCommand> out;
  out.reserve(mp.size() - 1);
  for (std::size_t k = 0; k + 1 < mp.size(); ++k) {
    const auto& p = mp[k];
    const auto& q = mp[k + 1];
    const double forwardD = p.triplet.d - q.triplet.d;
    if (std::abs(forwardD - step) > 1e-9)
      throw std::invalid_argument("commandsFromPath: waypoints are not adjacent d columns");

    TrackCommand c;
    c.delta_alpha = q.triplet.alpha - p.triplet.alpha;
    c.delta_beta = q.beta - p.beta;
    const bool pLifted = !detail::onGround(p.triplet.a, dims.r);
    const bool qLifted = !detail::onGround(q.triplet.a, dims.r);
    if (pLifted && qLifted) {
      if (!p.l_t || !q.l_t) throw std::invalid_argument("commandsFromPath: lifted waypoint without l_t");
      c.delta_m = *p.l_t - *q.l_t;
    } else {
      // Nose-up pitch rolls S2 back over its wheel.
      c.delta_m = forwardD - (q.theta - p.theta) * dims.r;
    }
    out.push_back(c);
  }
  return out;
}

/// Pose the plant takes at (d, a) with the flipper commanded to alpha,
/// holding the contact rules.
inline FullMorphology plantPose(double d, double a, double alpha, const RobotDims& dims,
                                const StepScene& scene, const PlannerParams& params,
                                const CriticalPoints& cp) {
  FullMorphology m;
  m.triplet = {d, a, alpha};
  const bool onEdge = !detail::onGround(a, scene.radius()) || d <= cp(8);
  if (onEdge) {
    const auto bt = contact::baseTangency({d, a}, dims, scene);
    if (!bt) throw InfeasibleError("simulateFollow: base cannot rest on the edge");
    const auto al = contact::edgeAlpha(dims, *bt, d, a, scene);
    if (!al) throw InfeasibleError("simulateFollow: front flipper cannot hold its contact");
    m.triplet.alpha = *al;
    m.theta = bt->theta;
    m.l_t = bt->l_t;
  } else {
    const auto range = alphaRange(d, scene.radius(), dims, scene, params, cp);
    if (!range) throw InfeasibleError("simulateFollow: plant reached an infeasible d");
    m.triplet.a = scene.radius();
    m.triplet.alpha = std::clamp(alpha, range->lo, range->hi);
    const auto theta = settleTheta(m.triplet, dims, scene, cp);
    if (!theta) throw InfeasibleError("simulateFollow: plant pose does not settle");
    m.theta = *theta;
  }
  const auto beta = recoverBeta(dims, m.triplet.d, m.triplet.a, m.theta, scene);
  if (!beta) throw InfeasibleError("simulateFollow: back flipper cannot be placed");
  m.beta = *beta;
  return m;
}

namespace detail {

// Where the rear wheel actually sits for an interpolated hub position: it
// rolls over the corner instead of cutting it, and it stays on the ground
// until the base can reach the arc.
inline Point2 supportedHub(Point2 s2, const RobotDims& dims, const StepScene& scene) {
  const double r = scene.radius();
  const Point2 c = scene.corner();
  const Point2 v = s2 - c;
  const double dist = norm(v);
  if (s2.x > 0.0 && s2.y > c.y && dist < r) return c + (r / dist) * v;
  if (!onGround(s2.y, r) && !contact::baseTangency(s2, dims, scene)) return {s2.x, r};
  return s2;
}

inline FollowRecord record(double t, const FullMorphology& target, const FullMorphology& sim,
                           const RobotDims& dims) {
  const auto pose = forwardKinematics(dims, sim);
  return {t,
          target.triplet.alpha, sim.triplet.alpha,
          target.beta, sim.beta,
          target.triplet.d, sim.triplet.d,
          target.theta, sim.theta,
          0.5 * (pose.s1.x + pose.s2.x), 0.5 * (pose.s1.y + pose.s2.y)};
}

inline void requireClear(const FullMorphology& m, const RobotDims& dims, const StepScene& scene) {
  const auto p = forwardKinematics(dims, m);
  const double worst = std::min({segmentMinClearance(p.s2, p.s1, scene),
                                 segmentMinClearance(p.s1, p.s0, scene),
                                 segmentMinClearance(p.s2, p.s3, scene)});
  if (worst < -kSolveTol) throw InfeasibleError("simulateFollow: substep pose penetrates the step");
}

}  // namespace detail

/// Open-loop replay. Each command is split into equal track increments; the
/// next command starts once the commanded travel is consumed. The body's
/// progress along the target path is the consumed fraction scaled by
/// (1 - slip).
inline FollowLog simulateFollow(const MorphologyPath& targets, const std::vector<TrackCommand>& commands,
                                const PlantState& initial, const RobotDims& dims, const StepScene& scene,
                                const FollowOptions& options = {}, const PlannerParams& params = {}) {
  if (targets.empty()) throw std::invalid_argument("simulateFollow: empty target path");
  if (!commands.empty() && commands.size() + 1 != targets.size())
    throw std::invalid_argument("simulateFollow: need one command per waypoint transition");
  if (options.substeps < 1) throw std::invalid_argument("simulateFollow: substeps must be >= 1");
  if (options.slip < 0 || options.slip > 1) throw std::invalid_argument("simulateFollow: slip must be in [0, 1]");

  const auto cp = criticalDs(dims, scene.height());
  FollowLog log;
  PlantState state = initial;
  log.records.push_back(detail::record(static_cast<double>(state.time), targets.front(), state.morphology, dims));

  const double last = static_cast<double>(targets.size() - 1);
  const double traction = 1.0 - options.slip;
  double alphaCmd = initial.morphology.triplet.alpha;
  const int S = options.substeps;

  for (std::size_t k = 0; k < commands.size(); ++k) {
    const auto& cmd = commands[k];
    const double alphaStart = alphaCmd;
    for (int s = 1; s <= S; ++s) {
      const double frac = static_cast<double>(s) / S;
      state.odometer += cmd.delta_m / S;
      ++state.time;

      const double u = std::min(last, traction * (static_cast<double>(k) + frac));
      const auto j = static_cast<std::size_t>(std::min(std::floor(u), last - 1.0));
      const double lambda = u - static_cast<double>(j);
      const auto& p = targets[j].triplet;
      const auto& q = targets[j + 1].triplet;
      const double d = std::lerp(p.d, q.d, lambda);
      const double a = std::lerp(p.a, q.a, lambda);
      const Point2 hub = detail::supportedHub({d, a}, dims, scene);
      const double alpha = s == S ? alphaStart + cmd.delta_alpha : alphaStart + frac * cmd.delta_alpha;

      state.morphology = plantPose(hub.x, hub.y, alpha, dims, scene, params, cp);
      detail::requireClear(state.morphology, dims, scene);
      log.records.push_back(detail::record(static_cast<double>(state.time), targets[k + 1], state.morphology, dims));
    }
    alphaCmd = alphaStart + cmd.delta_alpha;
  }
  log.final = state;
  return log;
}

inline std::vector<Point2> centerTrajectory(const FollowLog& log) {
  std::vector<Point2> out;
  out.reserve(log.records.size());
  for (const auto& r : log.records) out.push_back({r.cx, r.cz});
  return out;
}

}  // namespace flipclimb
