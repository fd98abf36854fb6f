#include <cmath>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "flexhull/oracle.hpp"

using namespace flexhull;

namespace {

const WindParams kWind{1.0, 0.1, 0.1, 1.2, 1.1, 1.0};

FlexDomain disk() { return make_battery(0.999, 1.0); }

}  // namespace

TEST(SupportEstimate, Examples) {
  const auto d = disk();
  const auto s = oracle::support_estimate(d, Point(0, 1), 1000);
  EXPECT_NEAR(s.value, 1.0, 1e-6);
  // the p cap of the near-disk sits at 0.999
  EXPECT_NEAR(oracle::support_estimate(d, Point(1, 0), 1000).value, 0.999, 1e-6);
  EXPECT_TRUE(d.contains(s.argmax, 1e-6));
  EXPECT_NEAR(s.direction.dot(s.argmax), s.value, 1e-12);

  const auto ac = oracle::support_estimate(make_ac(1.0, 0.5), Point(0, 1), 1000);
  EXPECT_EQ(ac.value, 0.5);
  EXPECT_EQ(ac.argmax, Point(1.0, 0.5));

  EXPECT_NEAR(oracle::support_estimate(make_pv(1.0, 1.0 + 1e-9), Point(1, 0), 1000).value, 0.0, 1e-9);
}

TEST(SupportEstimate, MonotoneAndConverged) {
  for (const auto& d : {make_battery(1.0, 2.0), make_pv(1.0, 2.0), make_wind(kWind)}) {
    const double half = d.bounding_box().half_width();
    for (int k = 0; k < 12; ++k) {
      const double t = 2.0 * M_PI * k / 12.0 + 0.1;
      const Point a(std::cos(t), std::sin(t));
      const double coarse = oracle::support_estimate(d, a, 1000).value;
      const double fine = oracle::support_estimate(d, a, 100000).value;
      EXPECT_GE(fine - coarse, -1e-9);
      EXPECT_LE(fine - coarse, 0.005 * half);
    }
  }
}

TEST(SupportClosedForm, AgreesWithSampling) {
  for (const auto& d : {make_battery(1.0, 2.0), make_pv(1.0, 2.0), make_wind(kWind), make_ac(2.0, 0.3)}) {
    for (int k = 0; k < 16; ++k) {
      const double t = 2.0 * M_PI * k / 16.0 + 0.05;
      const Point a(std::cos(t), std::sin(t));
      const auto exact = oracle::support_closed_form(d, a);
      ASSERT_TRUE(exact.has_value());
      EXPECT_NEAR(exact->value, oracle::support_estimate(d, a, 20000).value, 1e-6);
      EXPECT_TRUE(d.contains(exact->argmax, 1e-6));
    }
  }
  BasicSet box{{Polynomial2({{0, 0, 1.0}, {2, 0, -1.0}}), Polynomial2({{0, 0, 1.0}, {0, 2, -1.0}})}, "box",
               std::nullopt, {}};
  EXPECT_FALSE(oracle::support_closed_form(make_custom({box}, 1.0), Point(1, 0)).has_value());
}

TEST(OuterFitLp, Examples) {
  const auto sq = regular_prototype(4);
  const auto d = oracle::outer_fit_lp(disk(), sq);
  EXPECT_NEAR(d.alpha, 1.0, 1e-12);
  EXPECT_NEAR(d.beta.norm(), 0.0, 1e-9);
  const auto ac = oracle::outer_fit_lp(make_ac(1.0, 0.5), sq);
  EXPECT_NEAR(ac.alpha, 0.5, 1e-12);
  EXPECT_NEAR(ac.beta.x(), 0.5, 1e-12);
  EXPECT_NEAR(ac.beta.y(), 0.0, 1e-12);
  EXPECT_NEAR(oracle::outer_fit_lp(disk(), regular_prototype(6)).alpha, 1.0, 1e-9);
}

TEST(OuterFitFromSupports, TieBreakPicksSmallestBeta) {
  // supports 1, 0, 0.5, 0 on +p, -p, +q, -q: alpha = 0.5 forced by p, beta_q in [0, 0.5]
  const auto h = oracle::outer_fit_from_supports(regular_prototype(4), Eigen::Vector4d(1, 0, 0.5, 0));
  EXPECT_NEAR(h.alpha, 0.5, 1e-12);
  EXPECT_NEAR(h.beta.x(), 0.5, 1e-12);
  EXPECT_NEAR(h.beta.y(), 0.0, 1e-12);
  const auto shifted = oracle::outer_fit_from_supports(regular_prototype(4), Eigen::Vector4d(3, -1, 2, 0));
  EXPECT_NEAR(shifted.alpha, 1.0, 1e-12);
  EXPECT_NEAR(shifted.beta.x(), 2.0, 1e-12);
  EXPECT_NEAR(shifted.beta.y(), 1.0, 1e-12);
}

TEST(InnerFitGrid, Examples) {
  const auto sq = regular_prototype(4);
  const auto d = oracle::inner_fit_grid(disk(), sq, 41, 1e-3);
  EXPECT_NEAR(d.alpha, 1.0 / std::sqrt(2.0), 0.01);
  const auto pv = oracle::inner_fit_grid(make_pv(1.0, 1.0 + 1e-9), sq, 41, 1e-3);
  EXPECT_NEAR(pv.alpha, 1.0 / std::sqrt(5.0), 0.01);
  EXPECT_NEAR(pv.beta.x(), -1.0 / std::sqrt(5.0), 0.05);
  EXPECT_NEAR(pv.beta.y(), 0.0, 0.05);
  // alpha = 1 is capped by |p| <= 1; the unit box can still slide in q
  const auto battery = make_battery(1.0, 2.0);
  const auto b = oracle::inner_fit_grid(battery, sq, 41, 1e-3);
  EXPECT_NEAR(b.alpha, 1.0, 1e-3);
  EXPECT_NEAR(b.beta.x(), 0.0, 1e-9);
  EXPECT_TRUE(oracle::homothet_inside(battery, b, 64, 1e-9));
}

TEST(HomothetInside, DetectsOverflow) {
  const auto sq = regular_prototype(4);
  EXPECT_TRUE(oracle::homothet_inside(disk(), {sq, 0.7, Point(0, 0)}));
  EXPECT_FALSE(oracle::homothet_inside(disk(), {sq, 0.72, Point(0, 0)}));
}

TEST(MinkowskiSample, AcPairSumset) {
  const auto ac = make_ac(1.0, 0.5);
  std::set<std::pair<double, double>> seen;
  for (const auto& x : oracle::minkowski_sample({&ac, &ac}, 1000, 7)) seen.insert({x.x(), x.y()});
  EXPECT_EQ(seen, (std::set<std::pair<double, double>>{{0, 0}, {1, 0.5}, {2, 1}}));
}

TEST(MinkowskiSample, Disks) {
  const auto d = disk();
  for (const auto& x : oracle::minkowski_sample({&d}, 1000, 7)) EXPECT_LE(x.norm(), 1.0 + 1e-12);
  const auto pair = oracle::minkowski_sample({&d, &d}, 10000, 7);
  ASSERT_EQ(pair.size(), 10000u);
  double far = 0.0;
  for (const auto& x : pair) {
    EXPECT_LE(x.norm(), 2.0 + 1e-12);
    far = std::max(far, x.norm());
  }
  EXPECT_GT(far, 1.9);
  EXPECT_EQ(oracle::minkowski_sample({&d, &d}, 100, 7), oracle::minkowski_sample({&d, &d}, 100, 7));
}

TEST(SampledGap, MatchesPureTranslation) {
  const auto sq = regular_prototype(4);
  EXPECT_NEAR(oracle::sampled_gap({sq, 1.0, Point(3, 4)}, {sq, 1.0, Point(0, 0)}), 5.0, 1e-12);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_NE(oracle::derive_seed(1, 0), oracle::derive_seed(1, 1));
  EXPECT_EQ(oracle::derive_seed(9, 4), oracle::derive_seed(9, 4));
}
