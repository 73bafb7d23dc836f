#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "flipclimb/follower.hpp"

using namespace flipclimb;

namespace {

const RobotDims kDims;

FullMorphology waypoint(double d, double a, double alpha, double theta, double beta,
                        std::optional<double> lt = std::nullopt) {
  FullMorphology m;
  m.triplet = {d, a, alpha};
  m.theta = theta;
  m.beta = beta;
  m.l_t = lt;
  return m;
}

struct Run {
  MorphologyPath path;
  std::vector<TrackCommand> commands;
  FollowLog log;
};

const Run& runFor(double h) {
  static std::map<double, Run> cache;
  auto it = cache.find(h);
  if (it == cache.end()) {
    const StepScene scene(h, kDims.r);
    Run run;
    run.path = globalPlan(PlannerParams{}, kDims, scene);
    run.commands = commandsFromPath(run.path, kDims);
    run.log = simulateFollow(run.path, run.commands, PlantState{run.path.front()}, kDims, scene);
    it = cache.emplace(h, std::move(run)).first;
  }
  return it->second;
}

double maxSimTheta(const FollowLog& log) {
  double m = 0;
  for (const auto& r : log.records) m = std::max(m, r.theta_s);
  return m;
}

}  // namespace

TEST(CommandsFromPath, FlatPairDrivesTheGridStep) {
  const MorphologyPath mp{waypoint(0.40, 0.035, 0.9, 0, 0), waypoint(0.39, 0.035, 0.9, 0, 0)};
  const auto c = commandsFromPath(mp, kDims);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].delta_m, 0.01, 1e-15);
  EXPECT_EQ(c[0].delta_alpha, 0.0);
  EXPECT_EQ(c[0].delta_beta, 0.0);
}

TEST(CommandsFromPath, NoseUpPitchShortensTravel) {
  const MorphologyPath mp{waypoint(0.20, 0.035, 0.5, 0.0, 0.0), waypoint(0.19, 0.035, 0.4, 0.1, 0.1)};
  const auto c = commandsFromPath(mp, kDims);
  EXPECT_NEAR(c[0].delta_m, 0.0065, 1e-15);
  EXPECT_NEAR(c[0].delta_alpha, -0.1, 1e-15);
  EXPECT_NEAR(c[0].delta_beta, 0.1, 1e-15);
}

TEST(CommandsFromPath, OnEdgePairUsesTangentLength) {
  const MorphologyPath mp{waypoint(0.10, 0.06, -0.8, 0.67, 0.1, 0.10),
                          waypoint(0.09, 0.066, -0.9, 0.69, 0.1, 0.0878)};
  const auto c = commandsFromPath(mp, kDims);
  EXPECT_NEAR(c[0].delta_m, 0.10 - 0.0878, 1e-15);
}

TEST(CommandsFromPath, SeamTransitionUsesGroundBranch) {
  const MorphologyPath mp{waypoint(0.13, 0.035, -0.3, 0.68, 0.68, 0.139),
                          waypoint(0.12, 0.051, -0.7, 0.63, 0.1, 0.123)};
  const auto c = commandsFromPath(mp, kDims);
  EXPECT_NEAR(c[0].delta_m, 0.01 - (0.63 - 0.68) * kDims.r, 1e-15);
}

TEST(CommandsFromPath, RejectsShortOrUnevenPaths) {
  EXPECT_THROW(commandsFromPath({waypoint(0.4, 0.035, 0, 0, 0)}, kDims), std::invalid_argument);
  const MorphologyPath gap{waypoint(0.40, 0.035, 0, 0, 0), waypoint(0.39, 0.035, 0, 0, 0),
                           waypoint(0.37, 0.035, 0, 0, 0)};
  EXPECT_THROW(commandsFromPath(gap, kDims), std::invalid_argument);
}

TEST(CommandsFromPath, TelescopesBackToTheTargets) {
  const auto& run = runFor(0.095);
  double alpha = run.path.front().triplet.alpha, beta = run.path.front().beta;
  for (std::size_t k = 0; k < run.commands.size(); ++k) {
    alpha += run.commands[k].delta_alpha;
    beta += run.commands[k].delta_beta;
    EXPECT_NEAR(alpha, run.path[k + 1].triplet.alpha, 1e-12);
    EXPECT_NEAR(beta, run.path[k + 1].beta, 1e-12);
  }
}

TEST(SimulateFollow, ZeroCommandsLeaveTheStateAlone) {
  const StepScene scene(0.095, kDims.r);
  const MorphologyPath mp{waypoint(0.4, 0.035, 0.9774, 0, 0)};
  const PlantState start{mp.front(), 0.0, 0};
  const auto log = simulateFollow(mp, {}, start, kDims, scene);
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(log.final.morphology.triplet, start.morphology.triplet);
  EXPECT_EQ(log.final.odometer, 0.0);
  EXPECT_EQ(log.final.time, 0);
}

TEST(SimulateFollow, RejectsBadOptions) {
  const StepScene scene(0.095, kDims.r);
  const auto& run = runFor(0.095);
  FollowOptions bad;
  bad.substeps = 0;
  EXPECT_THROW(simulateFollow(run.path, run.commands, PlantState{run.path.front()}, kDims, scene, bad),
               std::invalid_argument);
  bad = {};
  bad.slip = 1.5;
  EXPECT_THROW(simulateFollow(run.path, run.commands, PlantState{run.path.front()}, kDims, scene, bad),
               std::invalid_argument);
}

class FollowHeights : public ::testing::TestWithParam<double> {};

TEST_P(FollowHeights, TracksTargetsAtCommandBoundaries) {
  const auto& run = runFor(GetParam());
  const int S = FollowOptions{}.substeps;
  ASSERT_EQ(run.log.records.size(), run.commands.size() * S + 1);
  for (std::size_t i = 0; i < run.log.records.size(); i += S) {
    const auto& r = run.log.records[i];
    EXPECT_NEAR(r.alpha_s, r.alpha_t, 1e-12) << "t=" << r.t;
    EXPECT_NEAR(r.beta_s, r.beta_t, 1e-12) << "t=" << r.t;
    EXPECT_NEAR(r.d_s, r.d_t, 1e-12) << "t=" << r.t;
  }
}

TEST_P(FollowHeights, EndsOnTheStep) {
  const double h = GetParam();
  const auto& run = runFor(h);
  EXPECT_LE(std::abs(run.log.final.morphology.triplet.d - run.path.back().triplet.d), 0.01);
  EXPECT_GT(run.log.final.morphology.theta, 0.0);
  const auto centre = centerTrajectory(run.log);
  EXPECT_LE(std::abs(centre.back().y - (h + kDims.r)), 0.01);
  EXPECT_GE(centre.back().y, centre.front().y + (h - 0.01));
}

TEST_P(FollowHeights, PitchHasNoSharpDrops) {
  const auto& run = runFor(GetParam());
  double waypointStep = 0;
  for (std::size_t k = 0; k + 1 < run.path.size(); ++k)
    waypointStep = std::max(waypointStep, std::abs(run.path[k + 1].theta - run.path[k].theta));
  for (std::size_t i = 1; i < run.log.records.size(); ++i)
    EXPECT_LE(std::abs(run.log.records[i].theta_s - run.log.records[i - 1].theta_s), waypointStep + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Heights, FollowHeights, ::testing::Values(0.046, 0.067, 0.095));

TEST(SimulateFollow, HigherStepsPitchMore) {
  EXPECT_GT(maxSimTheta(runFor(0.095).log), maxSimTheta(runFor(0.067).log));
  EXPECT_GT(maxSimTheta(runFor(0.067).log), maxSimTheta(runFor(0.046).log));
}

TEST(SimulateFollow, SlipUndershootsTheFinalTarget) {
  const StepScene scene(0.095, kDims.r);
  const auto& run = runFor(0.095);
  FollowOptions opt;
  opt.slip = 0.2;
  const auto log = simulateFollow(run.path, run.commands, PlantState{run.path.front()}, kDims, scene, opt);
  EXPECT_GT(log.final.morphology.triplet.d, run.path.back().triplet.d + 0.01);
  EXPECT_NEAR(log.final.odometer, run.log.final.odometer, 1e-12);
}

TEST(CenterTrajectory, FlatPoseMidpoint) {
  const StepScene scene(0.095, kDims.r);
  const MorphologyPath mp{waypoint(0.4, 0.035, 0.0, 0, 0)};
  const auto c = centerTrajectory(simulateFollow(mp, {}, PlantState{mp.front()}, kDims, scene));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].x, 0.3275, 1e-12);
  EXPECT_NEAR(c[0].y, 0.035, 1e-12);
}
