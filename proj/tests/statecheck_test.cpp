#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "feasibility_oracle.hpp"
#include "flipclimb/statecheck.hpp"

using namespace flipclimb;

namespace {

const RobotDims kDims;
const StepScene kScene(0.095, 0.035);
const PlannerParams kParams;

}  // namespace

TEST(ClassifyRegion, FarFromTheStepIsR1) {
  EXPECT_EQ(classifyRegion(0.40, 0.035, kDims, kScene).tag, RegionTag::R1);
}

TEST(ClassifyRegion, BelowGroundIsInvalid) {
  EXPECT_EQ(classifyRegion(0.40, 0.034, kDims, kScene).tag, RegionTag::Invalid);
  EXPECT_FALSE(alphaRange(0.40, 0.034, kDims, kScene, kParams).has_value());
}

TEST(ClassifyRegion, LiftedFarFromTheEdgeIsInvalid) {
  EXPECT_EQ(classifyRegion(0.30, 0.06, kDims, kScene).tag, RegionTag::Invalid);
}

TEST(ClassifyRegion, FlagsExactCriticalDistances) {
  const auto cp = criticalDs(kDims, kScene.height());
  for (int i = 1; i <= 9; ++i) EXPECT_TRUE(classifyRegion(cp(i), kDims.r, kDims, kScene, cp).onX(i)) << "X" << i;
}

TEST(ClassifyRegion, GroundSweepVisitsRegionsInOrder) {
  const auto cp = criticalDs(kDims, kScene.height());
  int last = 0;
  for (double d = 0.40; d > 0.0005; d -= 0.0005) {
    const auto reg = classifyRegion(d, kDims.r, kDims, kScene, cp);
    if (!reg.valid()) continue;
    EXPECT_GE(reg.index(), last) << "d=" << d;
    last = reg.index();
  }
  EXPECT_GE(last, static_cast<int>(RegionTag::R9));
}

TEST(ClassifyRegion, MidApproachMatchesOracle) {
  const double d = 0.25;
  const auto reg = classifyRegion(d, kDims.r, kDims, kScene);
  EXPECT_EQ(reg.tag, RegionTag::R5);
  const auto range = alphaRange(d, kDims.r, kDims, kScene, kParams);
  ASSERT_TRUE(range.has_value());
  for (double al = kParams.alpha_lb; al <= kParams.alpha_ub; al += 0.01) {
    if (std::abs(al - range->lo) < 1e-6 || std::abs(al - range->hi) < 1e-6) continue;
    EXPECT_EQ(range->contains(al), oracle::feasible(d, kDims.r, al, kDims, kScene)) << "alpha=" << al;
  }
}

TEST(AlphaRange, FullMotorRangeFarAway) {
  const auto range = alphaRange(0.40, 0.035, kDims, kScene, kParams);
  ASSERT_TRUE(range.has_value());
  EXPECT_NEAR(range->lo, -std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(range->hi, deg2rad(56.0), 1e-12);
  EXPECT_NEAR(range->hi, 0.9774, 1e-4);
}

TEST(AlphaRange, WallTouchLowerBoundJustBeyondX2) {
  const auto cp = criticalDs(kDims, kScene.height());
  const double d = cp(2) + 1e-4;
  ASSERT_EQ(classifyRegion(d, kDims.r, kDims, kScene, cp).tag, RegionTag::R2);
  const auto range = alphaRange(d, kDims.r, kDims, kScene, kParams, cp);
  ASSERT_TRUE(range.has_value());
  const auto p = forwardKinematics(kDims, d, kDims.r, 0.0, range->lo, 0.0);
  EXPECT_NEAR(clearance(p.s0, kScene), 0.0, 1e-9);
  EXPECT_NEAR(p.s0.x, kDims.r, 1e-9);  // on the dilated wall
  EXPECT_NEAR(segmentMinClearance(p.s1, p.s0, kScene), 0.0, 1e-9);
  const auto below = forwardKinematics(kDims, d, kDims.r, 0.0, range->lo - 0.01, 0.0);
  EXPECT_LT(segmentMinClearance(below.s1, below.s0, kScene), 0.0);
}

TEST(AlphaRange, R10PutsTheFlipperTipOnTheTopPlane) {
  // S1 drops as S2 rises onto the corner; find the lift leaving S1 1 cm above
  // the top plane.
  const double d = 0.04, lift = 0.01;
  auto s1Height = [&](double a) {
    const auto bt = contact::baseTangency({d, a}, kDims, kScene);
    return contact::s1Of(kDims, d, a, bt->theta).y;
  };
  const double a = oracle::bisect(kScene.radius() + 1e-3, kScene.topLevel() - 1e-3,
                                  [&](double x) { return s1Height(x) <= kScene.topLevel() + lift; });
  ASSERT_NEAR(s1Height(a), kScene.topLevel() + lift, 1e-9);
  ASSERT_EQ(classifyRegion(d, a, kDims, kScene).tag, RegionTag::R10);

  const auto range = alphaRange(d, a, kDims, kScene, kParams);
  ASSERT_TRUE(range.has_value());
  EXPECT_TRUE(range->isPoint());
  const double theta = contact::baseTangency({d, a}, kDims, kScene)->theta;
  EXPECT_NEAR(range->lo, -std::asin(lift / kDims.f) - theta, 1e-9);
  const auto p = forwardKinematics(kDims, d, a, theta, range->lo, 0.0);
  EXPECT_NEAR(p.s0.y, kScene.topLevel(), 1e-9);
}

TEST(AlphaRange, StaysInsideTheMotorBoundsAndShrinksWithThem) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dd(0.005, 0.4), aa(0.035, 0.13), shrink(0.0, 0.4);
  const auto cp = criticalDs(kDims, kScene.height());
  for (int i = 0; i < 2000; ++i) {
    const double d = dd(rng);
    const double a = i % 2 ? kDims.r : aa(rng);
    const auto wide = alphaRange(d, a, kDims, kScene, kParams, cp);
    PlannerParams narrow = kParams;
    narrow.alpha_lb += shrink(rng);
    narrow.alpha_ub -= shrink(rng);
    const auto tight = alphaRange(d, a, kDims, kScene, narrow, cp);
    if (wide) {
      EXPECT_GE(wide->lo, kParams.alpha_lb);
      EXPECT_LE(wide->hi, kParams.alpha_ub);
      EXPECT_LE(wide->lo, wide->hi);
    }
    if (tight) {
      ASSERT_TRUE(wide.has_value()) << "d=" << d << " a=" << a;
      EXPECT_GE(tight->lo, wide->lo);
      EXPECT_LE(tight->hi, wide->hi);
    }
  }
}

TEST(AnchoredGrid, IncludesBothEndpoints) {
  const auto g = anchoredGrid(0.0, 0.25, 0.1);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 0.25);
  EXPECT_EQ(anchoredGrid(1.0, 1.0, 0.1).size(), 1u);
  EXPECT_TRUE(anchoredGrid(1.0, 0.5, 0.1).empty());
}

TEST(FindAAlpha, FarColumnSpansTheMotorRange) {
  const auto col = findAAlpha(0.40, kDims, kScene, kParams);
  const auto expected = static_cast<std::size_t>(std::floor((kParams.alpha_ub - kParams.alpha_lb) / kParams.delta_alpha)) + 2;
  ASSERT_EQ(col.size(), expected);
  for (const auto& t : col) EXPECT_DOUBLE_EQ(t.a, kDims.r);
  EXPECT_DOUBLE_EQ(col.front().alpha, kParams.alpha_lb);
  EXPECT_DOUBLE_EQ(col.back().alpha, kParams.alpha_ub);
}

TEST(FindAAlpha, LiftsJustInsideX8) {
  const auto cp = criticalDs(kDims, kScene.height());
  const auto col = findAAlpha(cp(8) - 1e-3, kDims, kScene, kParams);
  const bool lifted = std::any_of(col.begin(), col.end(), [](const ConfigTriplet& t) { return t.a > kDims.r + 1e-9; });
  EXPECT_TRUE(lifted);
}

TEST(FindAAlpha, EmittedTripletsAreOracleFeasible) {
  const auto cp = criticalDs(kDims, kScene.height());
  for (double d : {0.40, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05}) {
    const auto col = findAAlpha(d, kDims, kScene, kParams, cp);
    ASSERT_FALSE(col.empty()) << "d=" << d;
    for (std::size_t i = 0; i < col.size(); i += 7) {
      const auto& t = col[i];
      EXPECT_TRUE(oracle::feasible(t.d, t.a, t.alpha, kDims, kScene)) << t.d << " " << t.a << " " << t.alpha;
      if (t.a > kDims.r + 1e-9) {
        const auto reg = classifyRegion(t.d, t.a, kDims, kScene, cp).tag;
        EXPECT_TRUE(reg == RegionTag::R8 || reg == RegionTag::R9 || reg == RegionTag::R10);
        const auto bt = contact::baseTangency({t.d, t.a}, kDims, kScene);
        ASSERT_TRUE(bt.has_value());
        EXPECT_GE(bt->l_t, 0.0);
        EXPECT_LE(bt->l_t, kDims.l);
      }
    }
  }
}

TEST(FindAAlpha, ColumnAtTenCentimetresMatchesOracle) {
  const double d = 0.10;
  const auto cp = criticalDs(kDims, kScene.height());
  std::size_t cells = 0, agree = 0;
  for (double a : heightGrid(kScene, kParams.delta_a)) {
    const auto range = alphaRange(d, a, kDims, kScene, kParams, cp);
    for (double al : anchoredGrid(kParams.alpha_lb, kParams.alpha_ub, kParams.delta_alpha)) {
      if (range && (std::abs(al - range->lo) < 1e-6 || std::abs(al - range->hi) < 1e-6)) continue;
      const bool mine = range && range->contains(al);
      ++cells;
      agree += mine == oracle::feasible(d, a, al, kDims, kScene);
    }
  }
  EXPECT_GE(static_cast<double>(agree) / static_cast<double>(cells), 0.999);
}

TEST(Oracle, TrivialCases) {
  EXPECT_TRUE(oracle::feasible(0.40, 0.035, 0.0, kDims, kScene));
  EXPECT_FALSE(oracle::feasible(0.40, 0.034, 0.0, kDims, kScene));
}
