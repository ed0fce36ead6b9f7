#include "fixtures.hpp"

#include "didsens/core_bounds.hpp"
#include "didsens/oracle.hpp"
#include "didsens/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace didsens;
using didsens::testing::make_gamma;
using didsens::testing::table_gamma;

namespace {

AnticipationIncrementBounds point_a(const Vector& v) { return {v, v}; }

}  // namespace

TEST(Decomposition, AttDecomposition) {
  EXPECT_DOUBLE_EQ(att_decomposition(-0.0260, 0.0, 0.0), -0.0260);
  EXPECT_DOUBLE_EQ(att_decomposition(0.0, 0.0, 0.0), 0.0);
  EXPECT_NEAR(att_decomposition(1.0, 0.5, 0.2), 1.3, 1e-15);
}

TEST(Decomposition, Pretrend) {
  EXPECT_DOUBLE_EQ(decompose_pretrend(-0.0523, 0.0), -0.0523);
  EXPECT_DOUBLE_EQ(decompose_pretrend(-0.0523, -0.0523), 0.0);
  EXPECT_NEAR(decompose_pretrend(0.2, 0.5), -0.3, 1e-15);
}

TEST(Decomposition, AnticipationLevel) {
  EXPECT_EQ(anticipation_level(Vector::Zero(2), 0), 0.0);
  Vector a(2);
  a << -0.0523, -0.0225;
  EXPECT_NEAR(anticipation_level(a, 0), -0.0748, 1e-15);
  EXPECT_EQ(anticipation_level(a, -2), 0.0);
  Vector b(3);
  b << 1, 2, 3;
  EXPECT_EQ(anticipation_level(b, -1), 3.0);
  EXPECT_THROW(anticipation_level(b, 1), ValidationError);
}

TEST(IdentifiedSetA, PointIdentification) {
  const ReducedForm g = table_gamma();
  const Interval iv = identified_set_a(g, AnticipationIncrementBounds::constant(2, 0, 0), 0.0);
  EXPECT_EQ(iv.lb, g.theta1);
  EXPECT_EQ(iv.ub, g.theta1);
}

TEST(IdentifiedSetA, RelativeMagnitudeOnly) {
  const ReducedForm g = table_gamma();
  const Interval iv = identified_set_a(g, AnticipationIncrementBounds::constant(2, 0, 0), 1.0);
  EXPECT_EQ(iv.lb, g.theta1 - 1.0 * 0.0523);
  EXPECT_EQ(iv.ub, g.theta1 + 1.0 * 0.0523);
  EXPECT_NEAR(iv.lb, -0.0783, 1e-12);
  EXPECT_NEAR(iv.ub, 0.0263, 1e-12);
  EXPECT_EQ(iv.lb_argmin.r, -1);
  EXPECT_EQ(iv.ub_argmax.r, -1);
}

TEST(IdentifiedSetA, FullAnticipation) {
  const ReducedForm g = table_gamma();
  for (double m : {0.0, 0.5, 3.0}) {
    const Interval iv = identified_set_a(g, point_a(g.pre_trends), m);
    const double expected = g.theta1 + g.pre_trends(0) + g.pre_trends(1);
    EXPECT_EQ(iv.lb, expected);
    EXPECT_EQ(iv.ub, expected);
    EXPECT_NEAR(iv.lb, -0.1008, 1e-12);
  }
}

TEST(IdentifiedSetA, LimitedAnticipation) {
  const ReducedForm g = make_gamma({0.3, -0.2, 0.15, -0.05}, 0.4);
  for (int ell = 0; ell <= 4; ++ell) {
    AnticipationIncrementBounds a = AnticipationIncrementBounds::constant(4, 0, 0);
    double expected = g.theta1;
    for (Index i = 0; i < 4; ++i) {
      if (pre_period(i, 4) > -ell) {
        a.lower(i) = a.upper(i) = g.pre_trends(i);
        expected += g.pre_trends(i);
      }
    }
    const Interval iv = identified_set_a(g, a, 0.0);
    EXPECT_EQ(iv.lb, expected) << "ell=" << ell;
    EXPECT_EQ(iv.ub, expected) << "ell=" << ell;
  }
}

TEST(IdentifiedSetA, DimensionMismatch) {
  EXPECT_THROW(identified_set_a(table_gamma(), AnticipationIncrementBounds::constant(3, 0, 0), 1.0),
               ValidationError);
  EXPECT_THROW(identified_set_a(table_gamma(), AnticipationIncrementBounds::constant(2, 1, 0), 1.0),
               ValidationError);
  EXPECT_THROW(identified_set_a(table_gamma(), AnticipationIncrementBounds::constant(2, 0, 0), -1.0),
               ValidationError);
}

TEST(IdentifiedSetP, Examples) {
  const ReducedForm g = table_gamma();
  const Interval none = identified_set_p(g, {0.0, 0.0}, 1.0);
  EXPECT_NEAR(none.lb, -0.0783, 1e-12);
  EXPECT_NEAR(none.ub, 0.0263, 1e-12);
  const Interval full = identified_set_p(g, {1.0, 1.0}, 2.5);
  EXPECT_NEAR(full.lb, -0.1008, 1e-12);
  EXPECT_EQ(full.lb, full.ub);
  const Interval zero = identified_set_p(make_gamma({0.0, 0.0}, 0.7), {-0.3, 1.4}, 5.0);
  EXPECT_EQ(zero.lb, 0.7);
  EXPECT_EQ(zero.ub, 0.7);
}

TEST(IdentifiedSetP, EqualsImpliedIncrementBounds) {
  CounterStream rng(11, 0);
  for (int i = 0; i < 300; ++i) {
    const Index S = 1 + static_cast<Index>(rng.index(3));
    ReducedForm g;
    g.pre_trends.resize(S);
    for (Index s = 0; s < S; ++s) g.pre_trends(s) = rng.uniform(-1, 1);
    g.theta1 = rng.uniform(-1, 1);
    const double lo = rng.uniform(-0.5, 1.5);
    const PretrendShareBounds p{lo, lo + rng.uniform(0, 1)};
    const double m = rng.uniform(0, 3);
    const Interval ip = identified_set_p(g, p, m);
    const Interval ia = identified_set_a(g, increment_bounds_from_shares(g, p), m);
    EXPECT_EQ(ip.lb, ia.lb);
    EXPECT_EQ(ip.ub, ia.ub);
  }
}

TEST(IdentifiedSetK, Examples) {
  const ReducedForm g = table_gamma();
  const Interval iv = identified_set_k(g, TreatmentShareBounds::constant(2, 0, 0), 1.0);
  EXPECT_NEAR(iv.lb, -0.0783, 1e-12);
  EXPECT_NEAR(iv.ub, 0.0263, 1e-12);
  const Interval z = identified_set_k(make_gamma({0.0, 0.0}, 0.0), TreatmentShareBounds::constant(2, -0.1, 0.2), 1.0);
  EXPECT_EQ(z.lb, 0.0);
  EXPECT_EQ(z.ub, 0.0);
  // Near the breakdown value 0.535 the lower bound sits close to -0.1.
  const Interval near = identified_set_k(g, TreatmentShareBounds::constant(2, 0, 0.3), 0.5);
  EXPECT_GT(near.lb, -0.1);
  EXPECT_LT(near.lb, -0.09);
  const Interval past = identified_set_k(g, TreatmentShareBounds::constant(2, 0, 0.3), 0.56);
  EXPECT_LT(past.lb, -0.1);
}

TEST(IdentifiedSetK, InfeasibleBoxThrows) {
  EXPECT_THROW(identified_set_k(table_gamma(), TreatmentShareBounds::constant(2, -0.4, 0.4), 1.0), InfeasibleError);
}

TEST(Nesting, ZeroAnticipationAgreesAcrossParameterizations) {
  CounterStream rng(12, 0);
  for (int i = 0; i < 500; ++i) {
    const Index S = 1 + static_cast<Index>(rng.index(4));
    ReducedForm g;
    g.pre_trends.resize(S);
    for (Index s = 0; s < S; ++s) g.pre_trends(s) = rng.uniform(-1, 1);
    g.theta1 = rng.uniform(-1, 1);
    const double m = rng.uniform(0, 4);
    const double dstar = g.pre_trends.cwiseAbs().maxCoeff();
    const Interval a = identified_set_a(g, AnticipationIncrementBounds::constant(S, 0, 0), m);
    const Interval p = identified_set_p(g, {0.0, 0.0}, m);
    const Interval k = identified_set_k(g, TreatmentShareBounds::constant(S, 0, 0), m);
    EXPECT_EQ(a.lb, g.theta1 - m * dstar);
    EXPECT_EQ(a.ub, g.theta1 + m * dstar);
    EXPECT_EQ(p.lb, a.lb);
    EXPECT_EQ(p.ub, a.ub);
    EXPECT_EQ(k.lb, a.lb);
    EXPECT_EQ(k.ub, a.ub);
  }
}

TEST(Properties, MonotoneInMagnitudeAndBox) {
  CounterStream rng(13, 0);
  for (int i = 0; i < 300; ++i) {
    const ReducedForm g = make_gamma({rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1));
    const double lo = rng.uniform(-1, 1), hi = lo + rng.uniform(0, 1);
    const double m = rng.uniform(0, 2);
    const auto box = AnticipationIncrementBounds::constant(2, lo, hi);
    const auto wider = AnticipationIncrementBounds::constant(2, lo - 0.1, hi + 0.1);
    const Interval base = identified_set_a(g, box, m);
    const Interval more_m = identified_set_a(g, box, m + 0.5);
    const Interval more_box = identified_set_a(g, wider, m);
    EXPECT_LE(more_m.lb, base.lb);
    EXPECT_GE(more_m.ub, base.ub);
    EXPECT_LE(more_box.lb, base.lb);
    EXPECT_GE(more_box.ub, base.ub);
  }
}

TEST(Properties, AttainmentReproducesEndpoints) {
  CounterStream rng(14, 0);
  for (int i = 0; i < 200; ++i) {
    const ReducedForm g = make_gamma({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1));
    const double m = rng.uniform(0, 2);
    const auto box = AnticipationIncrementBounds::constant(3, -0.3, 0.4);
    const Interval iv = identified_set_a(g, box, m);
    const Index r_lb = iv.lb_argmin.r + 2, r_ub = iv.ub_argmax.r + 2;
    EXPECT_NEAR(objective_a(g, iv.lb_argmin.point, iv.lb_argmin.m, r_lb), iv.lb, 1e-12);
    EXPECT_NEAR(objective_a(g, iv.ub_argmax.point, iv.ub_argmax.m, r_ub), iv.ub, 1e-12);
  }
}

TEST(KFeasibility, Examples) {
  EXPECT_TRUE(check_k_feasibility(TreatmentShareBounds::constant(2, -0.33, 0.33), 1.0));
  EXPECT_FALSE(check_k_feasibility(TreatmentShareBounds::constant(2, -1.0 / 3.0, 1.0 / 3.0), 1.0));
  EXPECT_TRUE(check_k_feasibility(TreatmentShareBounds::constant(2, 0, 0.49), 1.0));
  EXPECT_FALSE(check_k_feasibility(TreatmentShareBounds::constant(2, 0, 0.5), 1.0));
  for (double m : {0.0, 1.0, 100.0}) EXPECT_TRUE(check_k_feasibility(TreatmentShareBounds::constant(3, 0, 0), m));
}

TEST(KFeasibility, Thresholds) {
  EXPECT_EQ(symmetric_k_threshold(0.0), 1.0);
  EXPECT_EQ(symmetric_k_threshold(0.5), 0.5);
  EXPECT_DOUBLE_EQ(symmetric_k_threshold(1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(symmetric_k_threshold(2.0), 0.2);
  EXPECT_DOUBLE_EQ(symmetric_k_threshold(10.0), 1.0 / 21.0);
  EXPECT_DOUBLE_EQ(nonnegative_k_threshold(1.0), 0.5);
}

TEST(KFeasibility, BisectionMatchesThresholds) {
  for (double m : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    for (bool symmetric : {true, false}) {
      double lo = 0.0, hi = 1.5;
      auto feasible = [&](double K) {
        return check_k_feasibility(TreatmentShareBounds::constant(2, symmetric ? -K : 0.0, K), m);
      };
      ASSERT_TRUE(feasible(lo));
      ASSERT_FALSE(feasible(hi));
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
      }
      const double expected = symmetric ? symmetric_k_threshold(m) : nonnegative_k_threshold(m);
      EXPECT_NEAR(lo, expected, 1e-10) << "m=" << m << " symmetric=" << symmetric;
    }
  }
}

TEST(ThreePeriod, Examples) {
  const ReducedForm g = make_gamma({0.4}, 0.1);
  const auto r0 = classify_three_period_case(g, {Vector::Constant(1, -0.2), Vector::Constant(1, 0.3)}, 0.0);
  EXPECT_EQ(r0.which, ThreePeriodCase::cross);
  EXPECT_DOUBLE_EQ(r0.interval.lb, 0.1 - 0.2);
  EXPECT_DOUBLE_EQ(r0.interval.ub, 0.1 + 0.3);
  const auto r1 = classify_three_period_case(g, {Vector::Constant(1, -0.2), Vector::Constant(1, 0.3)}, 1.5);
  EXPECT_EQ(r1.which, ThreePeriodCase::same_lower);
  const auto r2 = classify_three_period_case(g, {Vector::Constant(1, 0.3), Vector::Constant(1, 0.5)}, 0.6);
  EXPECT_EQ(r2.which, ThreePeriodCase::cross);
  EXPECT_THROW(classify_three_period_case(table_gamma(), AnticipationIncrementBounds::constant(2, 0, 0), 1.0),
               ValidationError);
}

TEST(ThreePeriod, ClassificationMatchesEndpointComparison) {
  CounterStream rng(15, 0);
  for (int i = 0; i < 20000; ++i) {
    const double d = rng.uniform(-1, 1);
    const ReducedForm g = make_gamma({d}, rng.uniform(-1, 1));
    const double lo = rng.uniform(-1, 1), hi = lo + rng.uniform(0, 1);
    const double m = rng.uniform(0, 3);
    const AnticipationIncrementBounds a{Vector::Constant(1, lo), Vector::Constant(1, hi)};
    const auto res = classify_three_period_case(g, a, m);
    const double lb = std::min(g.theta1 + lo - m * std::abs(d - lo), g.theta1 + hi - m * std::abs(d - hi));
    const double ub = std::max(g.theta1 + lo + m * std::abs(d - lo), g.theta1 + hi + m * std::abs(d - hi));
    ASSERT_NEAR(res.interval.lb, lb, 1e-12);
    ASSERT_NEAR(res.interval.ub, ub, 1e-12);
    const Interval closed = identified_set_a(g, a, m);
    ASSERT_NEAR(res.interval.lb, closed.lb, 1e-12);
    ASSERT_NEAR(res.interval.ub, closed.ub, 1e-12);
  }
}

TEST(WidthComparison, Examples) {
  const ReducedForm g = make_gamma({1.0}, 0.0);
  const auto w = width_comparison(g, {Vector::Constant(1, 0.5), Vector::Constant(1, 0.5)}, 1.0);
  EXPECT_DOUBLE_EQ(w.w_pt, 2.0);
  EXPECT_DOUBLE_EQ(w.w_ptae, 1.0);
  EXPECT_TRUE(w.shorter);
  EXPECT_FALSE(width_comparison(g, {Vector::Constant(1, -0.1), Vector::Constant(1, 0.5)}, 1.0).shorter);
  EXPECT_FALSE(width_comparison(make_gamma({0.0}, 0.0), {Vector::Constant(1, -0.1), Vector::Constant(1, 0.5)}, 1.0).shorter);
  EXPECT_THROW(width_comparison(g, {Vector::Constant(1, 0.0), Vector::Constant(1, 0.5)}, 0.0), ValidationError);
}

TEST(WidthComparison, ZeroInBoxNeverShorter) {
  CounterStream rng(16, 0);
  for (int i = 0; i < 20000; ++i) {
    const ReducedForm g = make_gamma({rng.uniform(-1, 1)}, rng.uniform(-1, 1));
    const double lo = -rng.uniform(0, 1), hi = rng.uniform(0, 1);
    const double m = rng.uniform(1e-3, 3);
    const auto w = width_comparison(g, {Vector::Constant(1, lo), Vector::Constant(1, hi)}, m);
    ASSERT_FALSE(w.shorter) << "d=" << g.pre_trends(0) << " lo=" << lo << " hi=" << hi << " m=" << m;
  }
}
