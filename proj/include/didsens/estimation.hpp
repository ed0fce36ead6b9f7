#pragma once

#include "didsens/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace didsens {

struct PanelRow {
  std::string unit_id;
  std::string cluster_id;
  long long time = 0;
  double y = 0.0;
  int treated = 0;
};

// A validated balanced panel. Units and clusters are stored in sorted id
// order, so nothing downstream depends on the order rows arrived in.
class PanelDataset {
 public:
  // source_lines, when given, labels diagnostics with file line numbers.
  static PanelDataset from_rows(const std::vector<PanelRow>& rows,
                                const std::vector<std::size_t>& source_lines = {});

  Index num_pre() const { return changes_.cols() - 1; }
  Index num_units() const { return changes_.rows(); }
  Index num_clusters() const { return static_cast<Index>(cluster_ids_.size()); }

  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  const std::vector<std::string>& cluster_ids() const { return cluster_ids_; }
  const std::vector<long long>& periods() const { return periods_; }
  const Eigen::VectorXi& unit_cluster() const { return unit_cluster_; }
  const Vector& treated() const { return treated_; }
  // Column t holds Y_t - Y_{t-1} for t = -(S-1), ..., 1.
  const Matrix& outcome_changes() const { return changes_; }

 private:
  std::vector<std::string> unit_ids_;
  std::vector<std::string> cluster_ids_;
  std::vector<long long> periods_;
  Eigen::VectorXi unit_cluster_;
  Vector treated_;
  Matrix changes_;
};

// CSV with header unit_id,cluster_id,time,y,treated (any column order).
PanelDataset parse_panel_csv(std::istream& in, const std::string& source = "<input>");
PanelDataset read_panel_csv(const std::string& path);
void write_panel_csv(std::ostream& out, const std::vector<PanelRow>& rows);

ReducedForm compute_reduced_form(const PanelDataset& data);
// One nonnegative weight per cluster, in sorted cluster-id order.
ReducedForm compute_reduced_form(const PanelDataset& data, const Vector& cluster_weights);
// Same, returning nullopt instead of throwing when a group has zero weight.
std::optional<ReducedForm> try_reduced_form(const PanelDataset& data, const Vector& cluster_weights);

struct PosteriorDraws {
  Matrix draws;  // B x (S+1): pre-trends oldest first, then theta_1
  std::uint64_t seed = 0;
  std::string weight_level = "cluster";
  std::string method;     // "bayesian" or "frequentist"
  Index rejections = 0;   // degenerate draws that were redrawn

  Index num_draws() const { return draws.rows(); }
  Index num_pre() const { return draws.cols() - 1; }
  ReducedForm row(Index b) const;
};

// Normalized Exp(1) weights for one draw of the Bayesian bootstrap.
Vector bayesian_weights(Index num_clusters, std::uint64_t seed, Index draw, std::uint32_t attempt = 0);

PosteriorDraws bayesian_bootstrap(const PanelDataset& data, Index B, std::uint64_t seed);

// Variate source hook: value for (draw, cluster rank, attempt). Weights are
// the variates normalized to sum one within the draw.
using VariateSource = std::function<double(Index draw, Index cluster, std::uint32_t attempt)>;
PosteriorDraws bayesian_bootstrap_with_variates(const PanelDataset& data, Index B,
                                                const VariateSource& variate);

// Resamples clusters with replacement; weight of a cluster = its multiplicity / n.
Vector cluster_resample_weights(Index num_clusters, std::uint64_t seed, Index draw,
                                std::uint32_t attempt = 0);
PosteriorDraws frequentist_cluster_bootstrap(const PanelDataset& data, Index B, std::uint64_t seed);

struct CoordinateSummary {
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Median and [alpha/2, 1 - alpha/2] quantiles per column (linear interpolation).
std::vector<CoordinateSummary> posterior_summary(const Matrix& draws, double alpha);
std::vector<CoordinateSummary> posterior_summary(const PosteriorDraws& draws, double alpha);

// Synthetic panel whose population reduced form equals `gamma`. Treatment is
// assigned per unit; clusters share period shocks.
struct SyntheticPanelSpec {
  ReducedForm gamma;
  Index num_clusters = 2000;
  Index units_per_cluster = 2;
  double treated_share = 0.5;
  double noise_sd = 0.1;
  double cluster_sd = 0.05;
};

std::vector<PanelRow> simulate_panel_rows(const SyntheticPanelSpec& spec, std::uint64_t seed);

}  // namespace didsens
