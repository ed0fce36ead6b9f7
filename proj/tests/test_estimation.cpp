#include "fixtures.hpp"

#include "didsens/estimation.hpp"
#include "didsens/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace didsens;
using didsens::testing::make_gamma;

namespace {

std::vector<PanelRow> toy_rows() {
  std::vector<PanelRow> rows;
  const double treated[] = {0, 1, 3}, untreated[] = {0, 0, 1};
  for (int t = 0; t < 3; ++t) {
    rows.push_back({"a", "c1", t + 1, treated[t], 1});
    rows.push_back({"b", "c2", t + 1, untreated[t], 0});
  }
  return rows;
}

PanelDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_panel_csv(in, "test.csv");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

PanelDataset small_synthetic(Index clusters, std::uint64_t seed = 5) {
  SyntheticPanelSpec spec;
  spec.gamma = make_gamma({-0.05, 0.02}, -0.03);
  spec.num_clusters = clusters;
  return PanelDataset::from_rows(simulate_panel_rows(spec, seed));
}

}  // namespace

TEST(ReducedForm, ToyExample) {
  const ReducedForm g = compute_reduced_form(PanelDataset::from_rows(toy_rows()));
  ASSERT_EQ(g.num_pre(), 1);
  EXPECT_DOUBLE_EQ(g.pre_trends(0), 1.0);
  EXPECT_DOUBLE_EQ(g.theta1, 1.0);
}

TEST(ReducedForm, IdenticalTrajectoriesGiveZero) {
  std::vector<PanelRow> rows;
  for (int t = 1; t <= 4; ++t) {
    for (int u = 0; u < 4; ++u) rows.push_back({"u" + std::to_string(u), "c" + std::to_string(u % 2), t, 0.3 * t * t + (u % 2), u / 2});
  }
  const ReducedForm g = compute_reduced_form(PanelDataset::from_rows(rows));
  EXPECT_EQ(g.num_pre(), 2);
  EXPECT_NEAR(g.pre_trends.cwiseAbs().maxCoeff(), 0.0, 1e-14);
  EXPECT_NEAR(g.theta1, 0.0, 1e-14);
}

TEST(ReducedForm, SyntheticWithinThreeSd) {
  const PanelDataset data = small_synthetic(2000);
  const ReducedForm g = compute_reduced_form(data);
  const PosteriorDraws d = bayesian_bootstrap(data, 200, 3);
  const ReducedForm truth = make_gamma({-0.05, 0.02}, -0.03);
  for (Index j = 0; j < 3; ++j) {
    const Vector col = d.draws.col(j);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().mean());
    const double est = j < 2 ? g.pre_trends(j) : g.theta1;
    const double tru = j < 2 ? truth.pre_trends(j) : truth.theta1;
    EXPECT_LT(std::abs(est - tru), 3.0 * sd) << "coordinate " << j;
  }
}

TEST(ReducedForm, WeightErrors) {
  const PanelDataset data = PanelDataset::from_rows(toy_rows());
  EXPECT_THROW(compute_reduced_form(data, Vector::Ones(3)), ValidationError);
  Vector w(2);
  w << 1.0, 0.0;
  EXPECT_THROW(compute_reduced_form(data, w), ValidationError);
  EXPECT_FALSE(try_reduced_form(data, w).has_value());
  w << 1.0, -1.0;
  EXPECT_THROW(compute_reduced_form(data, w), ValidationError);
}

TEST(PanelValidation, Rejections) {
  auto rows = toy_rows();
  rows.pop_back();
  EXPECT_THROW(PanelDataset::from_rows(rows), ValidationError);  // unbalanced
  rows = toy_rows();
  rows.push_back(rows.front());
  EXPECT_THROW(PanelDataset::from_rows(rows), ValidationError);  // duplicate
  rows = toy_rows();
  rows[2].treated = 0;
  EXPECT_THROW(PanelDataset::from_rows(rows), ValidationError);  // treatment varies
  rows = toy_rows();
  for (auto& r : rows) r.treated = 1;
  EXPECT_THROW(PanelDataset::from_rows(rows), ValidationError);  // no untreated
  rows = toy_rows();
  for (auto& r : rows) {
    if (r.time == 3) r.time = 4;
  }
  EXPECT_THROW(PanelDataset::from_rows(rows), ValidationError);  // gap
}

TEST(PanelCsv, ParsesAnyColumnOrderAndQuotes) {
  const std::string text =
      "\xEF\xBB\xBFtreated,y,time,cluster_id,unit_id\r\n"
      "1,0,1,\"c,1\",a\n1,1,2,\"c,1\",a\n1,3,3,\"c,1\",a\n"
      "0,0,1,c2,b\n0,0,2,c2,b\n\n0,1,3,c2,b\n";
  const ReducedForm g = compute_reduced_form(parse(text));
  EXPECT_DOUBLE_EQ(g.pre_trends(0), 1.0);
  EXPECT_DOUBLE_EQ(g.theta1, 1.0);
}

TEST(PanelCsv, RowNumberedErrors) {
  const std::string header = "unit_id,cluster_id,time,y,treated\n";
  EXPECT_NE(parse_error(header + "a,c,1,0,1\na,c,2,oops,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_error(header + "a,c,1,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error(header + "a,c,1,0,2\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("unit_id,cluster_id,time,y\n").find("missing column 'treated'"), std::string::npos);
  EXPECT_NE(parse_error(header + "a,c,1,0,1\na,c,1,0,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_error(header + "a,\"c,1,0,1\n").find("unterminated"), std::string::npos);
  EXPECT_NE(parse_error("").find("missing header"), std::string::npos);
}

TEST(PanelCsv, WriteReadRoundTrip) {
  const auto rows = simulate_panel_rows({make_gamma({0.1}, 0.2), 20, 2, 0.5, 0.1, 0.05}, 9);
  std::ostringstream out;
  write_panel_csv(out, rows);
  const PanelDataset a = parse(out.str());
  const PanelDataset b = PanelDataset::from_rows(rows);
  EXPECT_EQ(a.outcome_changes(), b.outcome_changes());
}

TEST(Bootstrap, UniformVariatesReproducePlugIn) {
  const PanelDataset data = small_synthetic(50);
  const PosteriorDraws d = bayesian_bootstrap_with_variates(data, 1, [](Index, Index, std::uint32_t) { return 1.0; });
  const ReducedForm g = compute_reduced_form(data);
  ASSERT_EQ(d.num_draws(), 1);
  for (Index j = 0; j < 2; ++j) EXPECT_EQ(d.draws(0, j), g.pre_trends(j));
  EXPECT_EQ(d.draws(0, 2), g.theta1);
  const PosteriorDraws e = bayesian_bootstrap_with_variates(data, 1, [](Index, Index, std::uint32_t) { return 0.7; });
  for (Index j = 0; j < 3; ++j) EXPECT_NEAR(e.draws(0, j), d.draws(0, j), 1e-14);
}

TEST(Bootstrap, WeightsNormalized) {
  for (Index b = 0; b < 200; ++b) {
    const Vector w = bayesian_weights(37, 17, b);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_GE(w.minCoeff(), 0.0);
    const Vector r = cluster_resample_weights(37, 17, b);
    EXPECT_NEAR(r.sum(), 1.0, 1e-12);
    EXPECT_GE(r.minCoeff(), 0.0);
  }
}

TEST(Bootstrap, DeterministicAndThreadIndependent) {
  const PanelDataset data = small_synthetic(300);
  const PosteriorDraws a = bayesian_bootstrap(data, 400, 77);
  const PosteriorDraws b = bayesian_bootstrap(data, 400, 77);
  EXPECT_EQ(a.draws, b.draws);
  const PosteriorDraws c = bayesian_bootstrap(data, 400, 78);
  EXPECT_NE(a.draws, c.draws);
  const PosteriorDraws f1 = frequentist_cluster_bootstrap(data, 200, 5);
  const PosteriorDraws f2 = frequentist_cluster_bootstrap(data, 200, 5);
  EXPECT_EQ(f1.draws, f2.draws);
}

TEST(Bootstrap, PermutationInvariance) {
  SyntheticPanelSpec spec;
  spec.gamma = make_gamma({0.03, -0.01}, 0.05);
  spec.num_clusters = 120;
  auto rows = simulate_panel_rows(spec, 4);
  const PosteriorDraws a = bayesian_bootstrap(PanelDataset::from_rows(rows), 100, 8);
  CounterStream rng(1, 0);
  for (std::size_t i = rows.size() - 1; i > 0; --i) std::swap(rows[i], rows[rng.index(i + 1)]);
  const PosteriorDraws b = bayesian_bootstrap(PanelDataset::from_rows(rows), 100, 8);
  EXPECT_EQ(a.draws, b.draws);
  const PosteriorDraws fa = frequentist_cluster_bootstrap(PanelDataset::from_rows(rows), 50, 8);
  std::reverse(rows.begin(), rows.end());
  const PosteriorDraws fb = frequentist_cluster_bootstrap(PanelDataset::from_rows(rows), 50, 8);
  EXPECT_EQ(fa.draws, fb.draws);
}

TEST(Bootstrap, SingleClusterFrequentistFails) {
  auto rows = toy_rows();
  for (auto& r : rows) r.cluster_id = "only";
  const PanelDataset data = PanelDataset::from_rows(rows);
  EXPECT_EQ(data.num_clusters(), 1);
  EXPECT_THROW(frequentist_cluster_bootstrap(data, 10, 1), ValidationError);
}

TEST(Bootstrap, DegenerateResamplesAreRedrawn) {
  // Two clusters: a resample picking one cluster twice has no control group.
  const PanelDataset data = PanelDataset::from_rows(toy_rows());
  const PosteriorDraws f = frequentist_cluster_bootstrap(data, 50, 2);
  EXPECT_GT(f.rejections, 0);
  for (Index b = 0; b < 50; ++b) {
    EXPECT_DOUBLE_EQ(f.draws(b, 0), 1.0);
    EXPECT_DOUBLE_EQ(f.draws(b, 1), 1.0);
  }
}

TEST(Bootstrap, SmallSampleMatchesTruth) {
  const PanelDataset data = small_synthetic(1000, 6);
  const auto bay = posterior_summary(bayesian_bootstrap(data, 400, 1), 0.1);
  const auto fre = posterior_summary(frequentist_cluster_bootstrap(data, 400, 1), 0.1);
  const double truth[] = {-0.05, 0.02, -0.03};
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(bay[j].median, truth[j], 0.03);
    EXPECT_NEAR(bay[j].lo, fre[j].lo, 0.015);
    EXPECT_NEAR(bay[j].hi, fre[j].hi, 0.015);
  }
}

TEST(PosteriorSummary, Examples) {
  const auto c = posterior_summary(Matrix::Constant(10, 2, 0.25), 0.1);
  EXPECT_EQ(c[0].median, 0.25);
  EXPECT_EQ(c[1].lo, 0.25);
  EXPECT_EQ(c[1].hi, 0.25);
  Matrix m(100, 1);
  for (int i = 0; i < 100; ++i) m(i, 0) = 100 - i;
  const auto s = posterior_summary(m, 0.1);
  EXPECT_NEAR(s[0].lo, 5.95, 1e-12);
  EXPECT_NEAR(s[0].hi, 95.05, 1e-12);
  EXPECT_NEAR(s[0].median, 50.5, 1e-12);
  Matrix sym(2001, 1);
  CounterStream rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    sym(2 * i, 0) = rng.normal();
    sym(2 * i + 1, 0) = -sym(2 * i, 0);
  }
  sym(2000, 0) = 0.0;
  EXPECT_NEAR(posterior_summary(sym, 0.1)[0].median, 0.0, 1e-12);
  EXPECT_THROW(posterior_summary(Matrix(0, 1), 0.1), ValidationError);
  EXPECT_THROW(posterior_summary(m, 1.0), ValidationError);
}
