#include "fixtures.hpp"

#include "didsens/breakdown.hpp"
#include "didsens/core_bounds.hpp"
#include "didsens/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <variant>

using namespace didsens;
using didsens::testing::make_gamma;
using didsens::testing::table_gamma;

namespace {

Interval bound_at(const ReducedForm& g, const AnticipationBounds& b, double m) {
  return closed_form_interval(g, b, m);
}

// inf { M in [0, m_hi) : conclusion fails } by bisection; +inf if it holds on the whole range.
double bisect_breakdown(const ReducedForm& g, const AnticipationBounds& b, const Conclusion& c, double m_hi) {
  if (!c.holds(bound_at(g, b, 0.0))) return 0.0;
  if (c.holds(bound_at(g, b, m_hi))) return kInf;
  double lo = 0.0, hi = m_hi;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (c.holds(bound_at(g, b, mid)) ? lo : hi) = mid;
  }
  return hi;
}

double closed_frontier(const ReducedForm& g, const AnticipationBounds& b, const Conclusion& c) {
  if (const auto* p = std::get_if<PretrendShareBounds>(&b)) return frontier_p_threshold(g, *p, c);
  return frontier_k(g, std::get<TreatmentShareBounds>(b), c);
}

double admissible_cap(const AnticipationBounds& b) {
  if (const auto* k = std::get_if<TreatmentShareBounds>(&b)) {
    const double mm = m_max_k(*k);
    return std::isinf(mm) ? 1e6 : mm * (1.0 - 1e-9);
  }
  return 1e6;
}

Conclusion random_conclusion(CounterStream& rng) {
  return rng.uniform() < 0.5 ? Conclusion::negative() : Conclusion::above(rng.uniform(-1.5, 1.5));
}

}  // namespace

TEST(Conclusion, Holds) {
  Interval iv;
  iv.lb = -0.3;
  iv.ub = -0.1;
  EXPECT_TRUE(Conclusion::negative().holds(iv));
  EXPECT_TRUE(Conclusion::above(-0.4).holds(iv));
  EXPECT_FALSE(Conclusion::above(-0.3).holds(iv));
  iv.ub = 0.0;
  EXPECT_FALSE(Conclusion::negative().holds(iv));
}

TEST(FrontierP, PlugInValues) {
  const ReducedForm g = table_gamma();
  EXPECT_NEAR(frontier_p_sign(g, {0.0, 0.0}), 0.026 / 0.0523, 1e-12);
  EXPECT_NEAR(frontier_p_sign(g, {0.0, 0.0}), 0.4971, 1e-4);
  EXPECT_TRUE(std::isinf(frontier_p_sign(g, {1.0, 1.0})));
  EXPECT_EQ(frontier_p_sign(make_gamma({0.2, -0.1}, 0.05), {0.0, 0.4}), 0.0);
}

TEST(FrontierP, ThresholdGeneralizesSign) {
  CounterStream rng(21, 0);
  for (int i = 0; i < 300; ++i) {
    const RandomInstance inst = random_instance(Parameterization::pretrend_shares, 1 + static_cast<Index>(rng.index(3)), rng);
    const auto& p = std::get<PretrendShareBounds>(inst.bounds);
    EXPECT_EQ(frontier_p_threshold(inst.gamma, p, Conclusion::negative()), frontier_p_sign(inst.gamma, p));
  }
}

TEST(FrontierP, ThresholdExamples) {
  const ReducedForm g = table_gamma();
  EXPECT_NEAR(frontier_p_threshold(g, {0.0, 0.0}, Conclusion::above(-0.1)), 0.074 / 0.0523, 1e-12);
  EXPECT_EQ(frontier_p_threshold(make_gamma({0.3}, 0.2), {0.0, 0.0}, Conclusion::above(0.2)), 0.0);
}

TEST(FrontierK, PlugInValues) {
  const ReducedForm g = table_gamma();
  EXPECT_NEAR(frontier_k_threshold(g, TreatmentShareBounds::constant(2, 0, 0), -0.1), 1.4149, 1e-3);
  EXPECT_NEAR(frontier_k_threshold(g, TreatmentShareBounds::constant(2, 0, 0.3), -0.1), 0.044 / 0.0823, 1e-12);
  EXPECT_NEAR(frontier_k_threshold(g, TreatmentShareBounds::constant(2, 0, 0.3), -0.1), 0.535, 1e-2);
  // theta_1 at or below tau(1 - k_0): breakdown at zero.
  EXPECT_EQ(frontier_k_threshold(make_gamma({0.1, 0.2}, -0.2), TreatmentShareBounds::constant(2, 0, 0.2), -0.1), 0.0);
}

TEST(FrontierK, PlugInMatchesBisection) {
  const ReducedForm g = table_gamma();
  for (double hi : {0.0, 0.3}) {
    const TreatmentShareBounds k = TreatmentShareBounds::constant(2, 0, hi);
    const Conclusion c = Conclusion::above(-0.1);
    EXPECT_NEAR(frontier_k(g, k, c), bisect_breakdown(g, k, c, admissible_cap(k)), 1e-9);
  }
  EXPECT_NEAR(frontier_p_sign(g, {0, 0}),
              bisect_breakdown(g, PretrendShareBounds{0, 0}, Conclusion::negative(), 1e6), 1e-9);
}

TEST(MMaxK, Values) {
  EXPECT_NEAR(m_max_k(0.0, 0.3), 0.7 / 0.3, 1e-15);
  EXPECT_TRUE(std::isinf(m_max_k(0.2, 0.2)));
  EXPECT_EQ(m_max_k(0.0, 0.5), 1.0);
  EXPECT_GT(m_max_k(0.0, 1e-9), 1e8);
  EXPECT_THROW(m_max_k(0.0, 1.0), ValidationError);
  EXPECT_THROW(frontier_k_threshold(table_gamma(), TreatmentShareBounds::constant(2, 0, 1.0), -0.1), ValidationError);
}

TEST(MMaxK, MatchesFeasibilityBisection) {
  for (auto [lo, hi] : {std::pair{0.0, 0.3}, {-0.2, 0.1}, {-0.5, 0.5}}) {
    const TreatmentShareBounds k = TreatmentShareBounds::constant(2, lo, hi);
    double a = 0.0, b = 1e3;
    while (b - a > 1e-11) {
      const double mid = 0.5 * (a + b);
      (check_k_feasibility(k, mid) ? a : b) = mid;
    }
    EXPECT_NEAR(a, m_max_k(k), 1e-9);
  }
}

TEST(FrontierGridTest, PanelBehaviour) {
  const ReducedForm g = table_gamma();
  const auto axis = axis_vary_lower(0.0, 1.0, 11, 1.0);
  const FrontierGrid fg = frontier_grid(g, axis, Conclusion::negative(), Parameterization::pretrend_shares);
  ASSERT_EQ(fg.values.size(), 11u);
  for (std::size_t j = 1; j < fg.values.size(); ++j) EXPECT_GE(fg.values[j], fg.values[j - 1]);
  EXPECT_TRUE(std::isinf(fg.values.back()));
  EXPECT_EQ(fg.flags.back(), PointFlag::unbounded);
  for (std::size_t j = 0; j < axis.size(); ++j)
    EXPECT_EQ(fg.values[j], frontier_p_sign(g, {axis[j].lo, axis[j].hi}));
}

TEST(FrontierGridTest, SingletonAndEmptyRegion) {
  const auto one = frontier_grid(table_gamma(), {{0.0, 0.0}}, Conclusion::negative(), Parameterization::pretrend_shares);
  EXPECT_NEAR(one.values[0], 0.497, 1e-3);
  const auto zeros = frontier_grid(make_gamma({-0.05, 0.02}, 0.1), axis_diagonal(0.0, 1.0, 5), Conclusion::negative(),
                                   Parameterization::pretrend_shares);
  for (double v : zeros.values) EXPECT_EQ(v, 0.0);
}

TEST(FrontierGridTest, InvalidPointsAreFlagged) {
  const auto fg = frontier_grid(table_gamma(), axis_vary_upper(0.0, 0.5, 1.2, 3), Conclusion::above(-0.1),
                                Parameterization::treatment_shares);
  EXPECT_EQ(fg.flags[0], PointFlag::finite);
  EXPECT_EQ(fg.flags[2], PointFlag::invalid);
  EXPECT_TRUE(std::isnan(fg.values[2]));
  EXPECT_FALSE(fg.errors[2].empty());
  EXPECT_THROW(frontier_grid(table_gamma(), {}, Conclusion::negative(), Parameterization::pretrend_shares),
               ValidationError);
}

TEST(RobustRegion, Membership) {
  const ReducedForm g = table_gamma();
  EXPECT_TRUE(robust_region_membership(g, {0, 0}, 0.4, Conclusion::negative()));
  EXPECT_FALSE(robust_region_membership(g, {0, 0}, 0.6, Conclusion::negative()));
  EXPECT_TRUE(robust_region_membership(g, {1, 1}, 1e300, Conclusion::negative()));
  EXPECT_FALSE(robust_region_membership(0.5, 0.5));
}

TEST(CapFrontier, ReplacesOnlyLargeValues) {
  FrontierGrid fg;
  fg.values = {0.3, kInf, 250.0};
  fg.flags = {PointFlag::finite, PointFlag::unbounded, PointFlag::finite};
  const FrontierGrid capped = cap_frontier(fg);
  EXPECT_EQ(capped.values[0], 0.3);
  EXPECT_EQ(capped.values[1], 100.0);
  EXPECT_EQ(capped.values[2], 100.0);
  EXPECT_EQ(capped.flags[1], PointFlag::unbounded);
}

TEST(FrontierProperties, BisectionEquivalence) {
  CounterStream rng(22, 0);
  for (Parameterization param : {Parameterization::pretrend_shares, Parameterization::treatment_shares}) {
    for (int i = 0; i < 500; ++i) {
      const RandomInstance inst = random_instance(param, 1 + static_cast<Index>(rng.index(3)), rng);
      const Conclusion c = random_conclusion(rng);
      const double closed = closed_frontier(inst.gamma, inst.bounds, c);
      const double cap = admissible_cap(inst.bounds);
      const double bis = bisect_breakdown(inst.gamma, inst.bounds, c, cap);
      ASSERT_GE(closed, 0.0);
      if (std::isinf(closed)) {
        ASSERT_TRUE(std::isinf(bis) || bis >= cap * (1.0 - 1e-6)) << "instance " << i;
      } else {
        ASSERT_NEAR(closed, bis, 1e-9 * std::max(1.0, closed)) << "instance " << i;
      }
    }
  }
}

TEST(FrontierProperties, KFrontierBelowCap) {
  CounterStream rng(23, 0);
  for (int i = 0; i < 500; ++i) {
    const RandomInstance inst = random_instance(Parameterization::treatment_shares, 2, rng);
    const auto& k = std::get<TreatmentShareBounds>(inst.bounds);
    const double v = frontier_k(inst.gamma, k, random_conclusion(rng));
    if (std::isfinite(v)) {
      EXPECT_LT(v, m_max_k(k));
    }
  }
}

TEST(FrontierProperties, SignInvarianceUnderTreatmentShares) {
  CounterStream rng(24, 0);
  for (int inst = 0; inst < 20; ++inst) {
    const ReducedForm g = make_gamma({rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1));
    for (const Conclusion& c : {Conclusion::negative(), Conclusion::above(0.0)}) {
      const double base = frontier_k(g, TreatmentShareBounds::constant(2, 0, 0), c);
      int compared = 0;
      for (int tries = 0; compared < 50 && tries < 5000; ++tries) {
        const double lo = rng.uniform(-0.9, 0.9), hi = std::min(0.99, lo + rng.uniform(0, 0.5));
        const TreatmentShareBounds k = TreatmentShareBounds::constant(2, lo, hi);
        if (std::isfinite(base) && !(m_max_k(k) > base)) continue;
        ++compared;
        EXPECT_EQ(frontier_k(g, k, c), base);
      }
      EXPECT_EQ(compared, 50);
    }
  }
}
