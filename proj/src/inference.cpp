#include "didsens/inference.hpp"

#include "didsens/quantile.hpp"

#include <algorithm>
#include <cmath>

namespace didsens {

namespace {

constexpr double kScaleTol = 1e-12;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

}  // namespace

const char* to_string(BandFlag f) {
  switch (f) {
    case BandFlag::ok: return "ok";
    case BandFlag::degenerate_scale: return "degenerate_scale";
    case BandFlag::unbounded: return "unbounded";
  }
  return "?";
}

LowerBand simultaneous_lower_band(const Matrix& frontier_draws, double alpha,
                                  const std::vector<SensitivityPoint>& grid) {
  check_alpha(alpha);
  const Index B = frontier_draws.rows();
  const Index J = frontier_draws.cols();
  if (B < 2) throw ValidationError("lower band needs at least two draws");
  if (J < 1) throw ValidationError("lower band needs at least one grid point");
  if (!grid.empty() && static_cast<Index>(grid.size()) != J)
    throw ValidationError("grid length does not match the number of draw columns");
  if ((frontier_draws.array().isNaN()).any() || (frontier_draws.array() == -kInf).any() ||
      (frontier_draws.array() < 0.0).any())
    throw ValidationError("frontier draws must lie in [0, +inf]");

  LowerBand out;
  out.grid = grid;
  out.alpha = alpha;
  out.center.resize(J);
  out.mean.resize(J);
  out.scale.resize(J);
  out.band.resize(J);
  out.flags.assign(static_cast<std::size_t>(J), BandFlag::ok);

  for (Index j = 0; j < J; ++j) {
    std::vector<double> col(frontier_draws.col(j).data(), frontier_draws.col(j).data() + B);
    std::sort(col.begin(), col.end());
    const auto n_inf = std::count(col.begin(), col.end(), kInf);
    out.center(j) = quantile_linear_sorted(col, 0.5);
    if (2 * n_inf > B || std::isinf(out.center(j))) {
      out.flags[static_cast<std::size_t>(j)] = BandFlag::unbounded;
      out.mean(j) = out.scale(j) = out.band(j) = kInf;
      continue;
    }
    const double top = col[static_cast<std::size_t>(B - n_inf - 1)];
    const Vector w = frontier_draws.col(j).unaryExpr([top](double v) { return std::isinf(v) ? top : v; });
    out.mean(j) = w.mean();
    out.scale(j) = std::sqrt((w.array() - out.mean(j)).square().mean());
    if (out.scale(j) < kScaleTol) out.flags[static_cast<std::size_t>(j)] = BandFlag::degenerate_scale;
  }

  if (std::all_of(out.flags.begin(), out.flags.end(), [](BandFlag f) { return f == BandFlag::unbounded; }))
    throw ValidationError("every grid point is unbounded; no band to construct");

  // Largest standardized downward deviation per draw.
  std::vector<double> dev(static_cast<std::size_t>(B), 0.0);
  for (Index b = 0; b < B; ++b) {
    double d = 0.0;
    bool hard = false;
    for (Index j = 0; j < J; ++j) {
      const BandFlag f = out.flags[static_cast<std::size_t>(j)];
      if (f == BandFlag::unbounded) continue;
      const double v = frontier_draws(b, j);
      if (f == BandFlag::degenerate_scale) {
        if (v < out.center(j)) hard = true;
        continue;
      }
      d = std::max(d, (out.center(j) - v) / out.scale(j));
    }
    if (hard) ++out.hard_violations;
    dev[static_cast<std::size_t>(b)] = hard ? kInf : d;
  }
  std::vector<double> sorted = dev;
  std::sort(sorted.begin(), sorted.end());
  out.critical = quantile_inverse_ecdf_sorted(sorted, 1.0 - alpha);

  for (Index j = 0; j < J; ++j) {
    const BandFlag f = out.flags[static_cast<std::size_t>(j)];
    if (f == BandFlag::unbounded) continue;
    out.band(j) = f == BandFlag::degenerate_scale ? out.center(j)
                                                   : out.center(j) - out.critical * out.scale(j);
  }
  // D^(b) <= c and "draw above the band" agree in exact arithmetic; pull the
  // band down by rounding residue so the equivalence also holds in floating point.
  for (Index b = 0; b < B; ++b) {
    if (!(dev[static_cast<std::size_t>(b)] <= out.critical)) continue;
    for (Index j = 0; j < J; ++j) {
      if (out.flags[static_cast<std::size_t>(j)] == BandFlag::unbounded) continue;
      out.band(j) = std::min(out.band(j), frontier_draws(b, j));
    }
  }
  return out;
}

double band_coverage(const LowerBand& band, const Matrix& frontier_draws) {
  const Index B = frontier_draws.rows();
  if (B == 0 || frontier_draws.cols() != band.band.size())
    throw ValidationError("draw matrix does not match the band");
  Index covered = 0;
  for (Index b = 0; b < B; ++b) {
    bool ok = true;
    for (Index j = 0; j < frontier_draws.cols() && ok; ++j) {
      if (band.included(j)) ok = frontier_draws(b, j) >= band.band(j);
    }
    covered += ok ? 1 : 0;
  }
  return static_cast<double>(covered) / static_cast<double>(B);
}

CredibleSet pointwise_credible_set(const Vector& lower_draws, const Vector& upper_draws, double alpha) {
  check_alpha(alpha);
  const Index B = lower_draws.size();
  if (B == 0) throw ValidationError("credible set of empty draws");
  if (upper_draws.size() != B) throw ValidationError("lower and upper draws differ in length");
  if (!lower_draws.allFinite() || !upper_draws.allFinite())
    throw ValidationError("interval draws must be finite");

  CredibleSet cs;
  cs.alpha = alpha;
  std::vector<double> lo(lower_draws.data(), lower_draws.data() + B);
  std::vector<double> hi(upper_draws.data(), upper_draws.data() + B);
  cs.center_lb = quantile_linear(lo, 0.5);
  cs.center_ub = quantile_linear(hi, 0.5);

  std::vector<double> c(static_cast<std::size_t>(B));
  for (Index b = 0; b < B; ++b) {
    c[static_cast<std::size_t>(b)] =
        std::max({cs.center_lb - lower_draws(b), upper_draws(b) - cs.center_ub, 0.0});
  }
  std::vector<double> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  cs.enlargement = quantile_inverse_ecdf_sorted(sorted, 1.0 - alpha);
  cs.lb = cs.center_lb - cs.enlargement;
  cs.ub = cs.center_ub + cs.enlargement;
  for (Index b = 0; b < B; ++b) {
    if (c[static_cast<std::size_t>(b)] > cs.enlargement) continue;
    cs.lb = std::min(cs.lb, lower_draws(b));
    cs.ub = std::max(cs.ub, upper_draws(b));
  }
  return cs;
}

double credible_set_containment(const CredibleSet& set, const Vector& lower_draws,
                                const Vector& upper_draws) {
  const Index B = lower_draws.size();
  if (B == 0 || upper_draws.size() != B) throw ValidationError("interval draws are empty or mismatched");
  Index inside = 0;
  for (Index b = 0; b < B; ++b) inside += (lower_draws(b) >= set.lb && upper_draws(b) <= set.ub) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(B);
}

bool InnerRobustRegion::contains(Index j, double m) const {
  if (j < 0 || j >= band_.size()) throw ValidationError("grid index out of range");
  if (flags_[static_cast<std::size_t>(j)] == BandFlag::unbounded) return false;
  return m < band_(j);
}

InnerRobustRegion inner_robust_region(const LowerBand& band) { return InnerRobustRegion(band); }

}  // namespace didsens
