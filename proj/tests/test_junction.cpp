#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "triodflow/errors.hpp"
#include "triodflow/junction.hpp"

namespace triodflow {
namespace {

using testing::arc_triod;
using testing::curved_branch;
using testing::segment;
using testing::steiner_triod;
using testing::unit;
constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);

TEST(Triod, RequiresSharedJunctionAndDistinctEndpoints) {
  EXPECT_THROW(Triod({segment({0, 0}, {1, 0}, 3), segment({0, 1e-17}, {0, 1}, 3),
                      segment({0, 0}, {-1, -1}, 3)}),
               InvalidInput);
  EXPECT_THROW(Triod({segment({0, 0}, {1, 0}, 3), segment({0, 0}, {1, 0}, 4),
                      segment({0, 0}, {-1, -1}, 3)}),
               InvalidInput);
  EXPECT_NO_THROW(steiner_triod(5));
}

TEST(Triod, Orientation) {
  const Triod t = steiner_triod(5);
  EXPECT_EQ(t.orientation(), 1);
  const Triod flipped({t.curve(0), t.curve(2), t.curve(1)});
  EXPECT_EQ(flipped.orientation(), -1);
}

TEST(JunctionCurvatures, SteinerIsZero) {
  for (double k : junction_curvatures(steiner_triod(11))) EXPECT_NEAR(k, 0.0, 1e-12);
}

TEST(JunctionCurvatures, EqualArcs) {
  // Every branch bends clockwise with curvature -0.8.
  const Triple k = junction_curvatures(arc_triod({-0.8, -0.8, -0.8}, 129));
  for (double ki : k) EXPECT_NEAR(ki, -0.8, 1e-4);
  EXPECT_NEAR(k[0] + k[1] + k[2], -2.4, 1e-3);
}

TEST(JunctionCurvatures, BalancedArcs) {
  const Triple k = junction_curvatures(arc_triod({0.5, 0.5, -1.0}, 129));
  EXPECT_NEAR(k[0], 0.5, 1e-4);
  EXPECT_NEAR(k[2], -1.0, 1e-4);
  EXPECT_NEAR(k[0] + k[1] + k[2], 0.0, 2e-4);
}

TEST(LambdaFromK, Examples) {
  const Triple zero = lambda_from_k({0, 0, 0});
  for (double l : zero) EXPECT_EQ(l, 0.0);
  const Triple l = lambda_from_k({1, -1, 0});
  EXPECT_NEAR(l[0], 1 / sqrt3, 1e-15);
  EXPECT_NEAR(l[1], 1 / sqrt3, 1e-15);
  EXPECT_NEAR(l[2], -2 / sqrt3, 1e-15);
  EXPECT_NEAR(l[0] + l[1] + l[2], 0.0, 1e-15);
  EXPECT_NEAR(l[0] * l[0] + l[1] * l[1] + l[2] * l[2], 2.0, 1e-14);
  for (double v : lambda_from_k({1, 1, 1})) EXPECT_EQ(v, 0.0);
}

TEST(LambdaFromK, RandomIdentities) {
  std::mt19937_64 gen(20240);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const double a = u(gen), b = u(gen);
    const Triple k{a, b, -(a + b)};
    const Triple l = lambda_from_k(k);
    const double scale = std::max(1.0, k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    worst = std::max(worst, std::abs(l[0] + l[1] + l[2]) / std::sqrt(scale));
    worst = std::max(worst, std::abs(l[0] * l[0] + l[1] * l[1] + l[2] * l[2] -
                                     (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])) / scale);
    worst = std::max(worst, std::abs(k[0] * l[0] + k[1] * l[1] + k[2] * l[2]) / scale);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(JunctionLambdas, OrientationFlipsSign) {
  const Triple k{0.3, -0.1, -0.2};
  const Triod ccw = steiner_triod(5);
  const Triod cw({ccw.curve(0), ccw.curve(2), ccw.curve(1)});
  const Triple a = junction_lambdas(ccw, k);
  const Triple b = junction_lambdas(cw, k);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a[static_cast<std::size_t>(i)], -b[static_cast<std::size_t>(i)]);
}

TEST(JunctionIdentities, SteinerTriod) {
  const JunctionReport r = junction_identities(steiner_triod(11));
  EXPECT_NEAR(r.sum_k, 0.0, 1e-12);
  EXPECT_NEAR(r.sum_lambda, 0.0, 1e-12);
  EXPECT_NEAR(r.sum_sq_difference, 0.0, 1e-12);
  EXPECT_NEAR(r.sum_k_lambda, 0.0, 1e-12);
  EXPECT_NEAR(r.angle_defect, 0.0, 1e-12);
}

TEST(JunctionIdentities, SmoothTriodSumKIsFirstOrder) {
  // Curvatures balanced in the continuum; the tangents are made exactly
  // 120 degrees apart at the discrete level by relaxation.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(gen), b = u(gen);
  double prev = 0.0;
  for (std::size_t n : {33, 65, 129, 257}) {
    const Triod raw = arc_triod({a, b, -(a + b)}, n);
    const JunctionEnforcement e = enforce_junction(raw, raw.junction(), {1e-13, 50});
    const JunctionReport r = junction_identities(e.triod);
    EXPECT_LT(r.angle_defect, 1e-10);
    const double h = 1.0 / static_cast<double>(n - 1);
    EXPECT_LT(std::abs(r.sum_k), 10.0 * h);
    if (prev > 0.0) EXPECT_LT(std::abs(r.sum_k), 0.6 * prev);
    prev = std::abs(r.sum_k);
  }
}

TEST(AngleDefect, NinetyAndTwoObtuse) {
  const Triod t({segment({0, 0}, unit(0.0), 5), segment({0, 0}, unit(3 * pi / 4), 5),
                 segment({0, 0}, unit(5 * pi / 4), 5)});
  // |1 + e^{3 i pi / 4} + e^{5 i pi / 4}| = sqrt(2) - 1
  EXPECT_NEAR(angle_defect(t), 0.41421356237309503, 1e-12);
}

TEST(Compatibility, SteinerPassesEverything) {
  const CompatibilityReport r = compatibility_report(steiner_triod(11));
  EXPECT_TRUE(r.order0());
  EXPECT_TRUE(r.order1());
  EXPECT_TRUE(r.order2());
}

TEST(Compatibility, RawCurvesNotConcurrent) {
  const std::array<DiscreteCurve, 3> curves{segment({0, 0}, {1, 0}, 3), segment({0, 0.1}, {0, 1}, 3),
                                            segment({0, 0}, {-1, -1}, 3)};
  const CompatibilityReport r = compatibility_report(curves);
  EXPECT_FALSE(r.concurrent);
  EXPECT_FALSE(r.order0());
}

TEST(Compatibility, BentEndpointFailsOrder2a) {
  // Curve 0 arrives at its endpoint along an arc of curvature 1.
  const Triod s = steiner_triod(65);
  const DiscreteCurve bent = curved_branch(pi / 2, 1.0, 1.0, 65);
  const Triod t({bent, s.curve(1), s.curve(2)});
  const CompatibilityReport r = compatibility_report(t);
  EXPECT_TRUE(r.order1());
  EXPECT_FALSE(r.order2_endpoints());
}

TEST(Compatibility, UnbalancedArcsFailOrder2b) {
  const Triod t = arc_triod({0.5, 0.5, 0.5}, 129, 0.3);
  const CompatibilityReport r = compatibility_report(t, 1e-3);
  EXPECT_TRUE(r.order1());
  EXPECT_FALSE(r.order2_junction());
  EXPECT_GT(r.max_junction_velocity_mismatch, 0.5);
}

TEST(EndpointConditions, SteinerIsZero) {
  for (double v : endpoint_conditions(steiner_triod(11))) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(EndpointConditions, UnitArcAtFirstEndpoint) {
  const Triod s = steiner_triod(129);
  const Triod t({curved_branch(pi / 2, 1.0, 1.0, 129), s.curve(1), s.curve(2)});
  const Triple r = endpoint_conditions(t);
  EXPECT_NEAR(r[0], 1.0, 1e-3);
  EXPECT_NEAR(r[1], 0.0, 1e-10);
}

TEST(JunctionVelocities, BalancedArcsAgree) {
  const Triod t = arc_triod({0.6, -0.2, -0.4}, 257);
  const auto v = junction_velocities(t);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(distance(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>((i + 1) % 3)]), 5e-3);
  }
}

TEST(EnforceJunction, SteinerUnchanged) {
  const Triod s = steiner_triod(11);
  const JunctionEnforcement e = enforce_junction(s, s.junction());
  EXPECT_TRUE(e.converged);
  for (int i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 11; ++j) EXPECT_NEAR(distance(e.triod.curve(i)[j], s.curve(i)[j]), 0.0, 1e-15);
  }
}

TEST(EnforceJunction, DisplacedJunction) {
  const Triod s = steiner_triod(11);
  const Point o = s.junction() + Point{1e-3, 0};
  const JunctionEnforcement e = enforce_junction(s, o);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(e.triod.curve(i).front(), o);
    EXPECT_EQ(e.triod.endpoint(i), s.endpoint(i));
  }
  EXPECT_LT(angle_defect(e.triod), 1e-6);
  EXPECT_TRUE(e.converged);
}

TEST(EnforceJunction, ReducesLargeDefect) {
  const Triod t({segment({0, 0}, unit(0.0), 9), segment({0, 0}, unit(1.8), 9),
                 segment({0, 0}, unit(4.3), 9)});
  const double before = angle_defect(t);
  EXPECT_NEAR(before, 0.40, 0.05);
  const JunctionEnforcement one = enforce_junction(t, t.junction(), {1e-8, 1});
  EXPECT_LT(one.final_defect, before);
  EXPECT_DOUBLE_EQ(one.initial_defect, before);
  const JunctionEnforcement full = enforce_junction(t, t.junction(), {1e-12, 50});
  EXPECT_LT(full.final_defect, 1e-11);
}

}  // namespace
}  // namespace triodflow
