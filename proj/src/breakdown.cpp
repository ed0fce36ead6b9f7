#include "didsens/breakdown.hpp"

#include "didsens/core_bounds.hpp"
#include "didsens/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace didsens {

namespace {

// inf { M >= 0 : g <= M h }, with inf of the empty set = +inf.
double first_crossing(double g, double h) {
  if (h > 0.0) return std::max(0.0, g / h);
  return g <= 0.0 ? 0.0 : kInf;
}

void check_k_below_one(const TreatmentShareBounds& k) {
  if (k.k_hi.maxCoeff() >= 1.0)
    throw ValidationError("k-frontier requires every upper share bound below 1");
}

// Sum of theta_1 and the sign-selected share terms for j != r. upper_select
// picks p_hi on nonnegative pre-trends (the upper-bound selection).
double share_base(const ReducedForm& gamma, const PretrendShareBounds& p, Index r,
                  bool upper_select) {
  const Vector& d = gamma.pre_trends;
  double n = gamma.theta1;
  for (Index j = 0; j < d.size(); ++j) {
    if (j == r) continue;
    const bool nonneg = d(j) >= 0.0;
    const double share = (nonneg == upper_select) ? p.p_hi : p.p_lo;
    n += share * d(j);
  }
  return n;
}

}  // namespace

const char* to_string(PointFlag f) {
  switch (f) {
    case PointFlag::finite: return "finite";
    case PointFlag::unbounded: return "unbounded";
    case PointFlag::invalid: return "invalid";
  }
  return "?";
}

bool Conclusion::holds(const Interval& identified) const {
  return kind == Kind::att_negative ? identified.ub < 0.0 : identified.lb > tau;
}

double frontier_p_sign(const ReducedForm& gamma, const PretrendShareBounds& p) {
  validate(gamma);
  validate(p);
  double best = kInf;
  for (Index r = 0; r < gamma.num_pre(); ++r) {
    const double dr = gamma.pre_trends(r);
    const double base = share_base(gamma, p, r, true);
    for (double pv : {p.p_lo, p.p_hi}) {
      const double n = base + pv * dr;
      const double d = std::abs(dr * (1.0 - pv));
      double mu;
      if (d > 0.0) {
        mu = std::max(0.0, -n / d);
      } else {
        mu = n >= 0.0 ? 0.0 : kInf;
      }
      best = std::min(best, mu);
    }
  }
  return best;
}

double frontier_p_threshold(const ReducedForm& gamma, const PretrendShareBounds& p,
                            const Conclusion& c) {
  validate(gamma);
  validate(p);
  if (!std::isfinite(c.tau)) throw ValidationError("conclusion threshold must be finite");
  const bool upper = c.kind == Conclusion::Kind::att_negative;
  const double tau = c.threshold();
  double best = kInf;
  for (Index r = 0; r < gamma.num_pre(); ++r) {
    const double dr = gamma.pre_trends(r);
    const double base = share_base(gamma, p, r, upper);
    for (double pv : {p.p_lo, p.p_hi}) {
      const double n = base + pv * dr;
      const double d = std::abs(dr * (1.0 - pv));
      // Upper: fails once N + M D >= tau. Lower: fails once N - M D <= tau.
      const double g = upper ? tau - n : n - tau;
      best = std::min(best, first_crossing(g, d));
    }
  }
  return best;
}

double m_max_k(double k_lo, double k_hi) {
  if (!std::isfinite(k_lo) || !std::isfinite(k_hi) || k_lo > k_hi)
    throw ValidationError("k bounds must be finite with k_lo <= k_hi");
  if (k_hi >= 1.0) throw ValidationError("M_max requires k_hi < 1");
  return k_lo < k_hi ? (1.0 - k_hi) / (k_hi - k_lo) : kInf;
}

double m_max_k(const TreatmentShareBounds& k) {
  const Index S = k.k_lo.size() - 1;
  validate(k, S);
  check_k_below_one(k);
  if (k.is_constant()) return m_max_k(k.k_lo(0), k.k_hi(0));
  // General boxes: smallest (1 - k_0)/|k_r - k_{r-1}| over J(r) vertices.
  double best = kInf;
  for (Index i = 0; i < S; ++i) {
    const bool r_is_zero = i + 1 == S;
    for (double k0 : {k.k_lo(S), k.k_hi(S)}) {
      for (double kr1 : {k.k_lo(i), k.k_hi(i)}) {
        for (double kr : {k.k_lo(i + 1), k.k_hi(i + 1)}) {
          const double diff = std::abs((r_is_zero ? k0 : kr) - kr1);
          if (diff > 0.0) best = std::min(best, (1.0 - k0) / diff);
        }
      }
    }
  }
  return best;
}

double frontier_k(const ReducedForm& gamma, const TreatmentShareBounds& k, const Conclusion& c) {
  validate(gamma);
  validate(k, gamma.num_pre());
  check_k_below_one(k);
  if (!std::isfinite(c.tau)) throw ValidationError("conclusion threshold must be finite");
  const Index S = gamma.num_pre();
  const double m_max = m_max_k(k);
  const bool upper = c.kind == Conclusion::Kind::att_negative;
  const double tau = c.threshold();
  double best = kInf;
  for (Index i = 0; i < S; ++i) {
    const bool r_is_zero = i + 1 == S;
    for (double k0 : {k.k_lo(S), k.k_hi(S)}) {
      for (double kr1 : {k.k_lo(i), k.k_hi(i)}) {
        for (double kr_v : {k.k_lo(i + 1), k.k_hi(i + 1)}) {
          const double kr = r_is_zero ? k0 : kr_v;
          // With a positive denominator, f <= tau iff g <= m h.
          double g = gamma.theta1 - tau * (1.0 - k0);
          double h = gamma.pre_trends(i) - tau * (kr - kr1);
          if (upper) {
            g = -g;
            h = -h;
          }
          double mu = std::min(first_crossing(g, h), first_crossing(g, -h));
          if (mu >= m_max) mu = kInf;
          best = std::min(best, mu);
        }
      }
    }
  }
  return best;
}

double frontier_k_threshold(const ReducedForm& gamma, const TreatmentShareBounds& k, double tau) {
  return frontier_k(gamma, k, Conclusion::above(tau));
}

FrontierGrid frontier_grid(const ReducedForm& gamma, const std::vector<SensitivityPoint>& axis,
                           const Conclusion& c, Parameterization parameterization) {
  validate(gamma);
  if (axis.empty()) throw ValidationError("frontier grid axis is empty");
  if (parameterization == Parameterization::increments)
    throw ValidationError("frontiers are defined for the p and k parameterizations only");
  FrontierGrid grid;
  grid.axis = axis;
  grid.values.assign(axis.size(), std::numeric_limits<double>::quiet_NaN());
  grid.flags.assign(axis.size(), PointFlag::invalid);
  grid.errors.assign(axis.size(), std::string());
  parallel_for(axis.size(), [&](std::size_t j) {
    try {
      const SensitivityPoint& pt = axis[j];
      double v;
      if (parameterization == Parameterization::pretrend_shares) {
        const PretrendShareBounds p{pt.lo, pt.hi};
        v = c.kind == Conclusion::Kind::att_negative ? frontier_p_sign(gamma, p)
                                                     : frontier_p_threshold(gamma, p, c);
      } else {
        v = frontier_k(gamma, TreatmentShareBounds::constant(gamma.num_pre(), pt.lo, pt.hi), c);
      }
      grid.values[j] = v;
      grid.flags[j] = std::isinf(v) ? PointFlag::unbounded : PointFlag::finite;
    } catch (const std::exception& e) {
      grid.errors[j] = e.what();
    }
  });
  return grid;
}

namespace {
std::vector<double> linspace(double from, double to, Index count) {
  if (count < 1) throw ValidationError("axis needs at least one point");
  if (!std::isfinite(from) || !std::isfinite(to)) throw ValidationError("axis ends must be finite");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] =
        count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = count == 1 ? from : to;
  return v;
}
}  // namespace

std::vector<SensitivityPoint> axis_vary_lower(double from, double to, Index count, double hi) {
  std::vector<SensitivityPoint> out;
  for (double lo : linspace(from, to, count)) out.push_back({lo, hi});
  return out;
}

std::vector<SensitivityPoint> axis_vary_upper(double lo, double from, double to, Index count) {
  std::vector<SensitivityPoint> out;
  for (double hi : linspace(from, to, count)) out.push_back({lo, hi});
  return out;
}

std::vector<SensitivityPoint> axis_diagonal(double from, double to, Index count) {
  std::vector<SensitivityPoint> out;
  for (double v : linspace(from, to, count)) out.push_back({v, v});
  return out;
}

bool robust_region_membership(double m, double breakdown_value) {
  validate_magnitude(m);
  return m < breakdown_value;
}

bool robust_region_membership(const ReducedForm& gamma, const PretrendShareBounds& p, double m,
                              const Conclusion& c) {
  return robust_region_membership(m, frontier_p_threshold(gamma, p, c));
}

FrontierGrid cap_frontier(FrontierGrid grid, double cap) {
  for (double& v : grid.values) {
    if (v > cap) v = cap;
  }
  return grid;
}

}  // namespace didsens
