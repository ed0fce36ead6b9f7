#pragma once

#include "didsens/breakdown.hpp"
#include "didsens/types.hpp"

#include <string>
#include <vector>

namespace didsens {

enum class BandFlag {
  ok,
  degenerate_scale,  // s_j < 1e-12
  unbounded,         // more than half the draws (or the median) are +inf
};

const char* to_string(BandFlag f);

struct LowerBand {
  std::vector<SensitivityPoint> grid;  // may be empty when the caller has no axis
  Vector center;  // posterior median m_hat_j
  Vector mean;    // posterior mean (winsorized); reported, not used by the band
  Vector scale;   // posterior SD s_j, 1/B divisor, winsorized
  Vector band;    // L_hat_j
  std::vector<BandFlag> flags;
  double critical = 0.0;  // c^D_{1-alpha}
  double alpha = 0.0;
  Index hard_violations = 0;  // draws below a zero-scale center

  bool included(Index j) const { return flags[static_cast<std::size_t>(j)] != BandFlag::unbounded; }
};

// frontier_draws is B x J; entries may be +inf.
LowerBand simultaneous_lower_band(const Matrix& frontier_draws, double alpha,
                                  const std::vector<SensitivityPoint>& grid = {});

// Share of draws lying on or above the band at every included grid point.
double band_coverage(const LowerBand& band, const Matrix& frontier_draws);

struct CredibleSet {
  double center_lb = 0.0;  // median of L^(b)
  double center_ub = 0.0;  // median of U^(b)
  double enlargement = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  double alpha = 0.0;
};

CredibleSet pointwise_credible_set(const Vector& lower_draws, const Vector& upper_draws, double alpha);

// Share of draws with [L^(b), U^(b)] inside [lb, ub].
double credible_set_containment(const CredibleSet& set, const Vector& lower_draws,
                                const Vector& upper_draws);

// {(j, M) : M < L_hat_j}. Grid points flagged unbounded carry no coverage
// statement and are never members.
class InnerRobustRegion {
 public:
  explicit InnerRobustRegion(const LowerBand& band) : band_(band.band), flags_(band.flags) {}

  bool contains(Index j, double m) const;
  Index size() const { return band_.size(); }

 private:
  Vector band_;
  std::vector<BandFlag> flags_;
};

InnerRobustRegion inner_robust_region(const LowerBand& band);

}  // namespace didsens
