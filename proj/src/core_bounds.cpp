#include "didsens/core_bounds.hpp"

#include <array>
#include <cmath>
#include <string>

namespace didsens {

namespace {

constexpr double kDenominatorTol = 1e-12;

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_dims(Index got, Index want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(want) +
                          " entries, got " + std::to_string(got));
  }
}

// Position of k_s inside a TreatmentShareBounds vector.
Index k_pos(int s, Index num_pre) { return static_cast<Index>(s) + num_pre; }

// Candidate values for the coordinate A_r together with the reported
// parameter value (A itself or the share p) that produces it.
struct Separable {
  Vector base_lo, base_hi;    // contribution of j != r to LB / UB
  Vector point_lo, point_hi;  // reported parameter for j != r
  Vector cand_a[2];           // two candidate A_r values per r
  Vector cand_point[2];
};

std::vector<Interval> separable_components(const ReducedForm& gamma, const Separable& sep,
                                           double M) {
  const Index S = gamma.num_pre();
  const Vector& d = gamma.pre_trends;
  std::vector<Interval> out(static_cast<std::size_t>(S));
  for (Index i = 0; i < S; ++i) {
    int lo_pick = 0, hi_pick = 0;
    double lo_term = 0.0, hi_term = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double a = sep.cand_a[c](i);
      const double dev = std::abs(d(i) - a);
      const double lo_v = a - M * dev;
      const double hi_v = a + M * dev;
      if (c == 0 || lo_v < lo_term) { lo_term = lo_v; lo_pick = c; }
      if (c == 0 || hi_v > hi_term) { hi_term = hi_v; hi_pick = c; }
    }
    // Summed in period order so that differently indexed r share one rounding path.
    double lb = gamma.theta1, ub = gamma.theta1;
    for (Index j = 0; j < S; ++j) {
      lb += (j == i) ? lo_term : sep.base_lo(j);
      ub += (j == i) ? hi_term : sep.base_hi(j);
    }
    Interval& iv = out[static_cast<std::size_t>(i)];
    iv.lb = lb;
    iv.ub = ub;
    const int r = pre_period(i, S);
    const double dev_lo = d(i) - sep.cand_a[lo_pick](i);
    const double dev_hi = d(i) - sep.cand_a[hi_pick](i);
    iv.lb_argmin = {r, dev_lo >= 0.0 ? M : -M, sep.point_lo};
    iv.lb_argmin.point(i) = sep.cand_point[lo_pick](i);
    iv.ub_argmax = {r, dev_hi >= 0.0 ? -M : M, sep.point_hi};
    iv.ub_argmax.point(i) = sep.cand_point[hi_pick](i);
  }
  return out;
}

Interval merge(const std::vector<Interval>& parts) {
  Interval out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].lb < out.lb) { out.lb = parts[i].lb; out.lb_argmin = parts[i].lb_argmin; }
    if (parts[i].ub > out.ub) { out.ub = parts[i].ub; out.ub_argmax = parts[i].ub_argmax; }
  }
  return out;
}

// Vertices of the k box restricted to J(r), as (k_0, k_r, k_{r-1}) triples.
// For r = 0, k_r and k_0 coincide so only four distinct triples exist.
std::vector<std::array<double, 3>> k_vertices(const TreatmentShareBounds& k, Index i, Index S) {
  const Index p0 = k_pos(0, S);
  const Index pr = i + 1;
  const Index pr1 = i;
  std::vector<std::array<double, 3>> out;
  const std::array<double, 2> k0v{k.k_lo(p0), k.k_hi(p0)};
  const std::array<double, 2> kr1v{k.k_lo(pr1), k.k_hi(pr1)};
  if (pr == p0) {
    for (double k0 : k0v)
      for (double kr1 : kr1v) out.push_back({k0, k0, kr1});
  } else {
    const std::array<double, 2> krv{k.k_lo(pr), k.k_hi(pr)};
    for (double k0 : k0v)
      for (double kr : krv)
        for (double kr1 : kr1v) out.push_back({k0, kr, kr1});
  }
  return out;
}

double k_ratio(double theta, double d_r, double k0, double kr, double kr1, double m) {
  return (theta - m * d_r) / (1.0 - k0 - m * (kr - kr1));
}

}  // namespace

void validate(const ReducedForm& gamma) {
  if (gamma.num_pre() < 1) throw ValidationError("reduced form needs at least one pre-trend");
  if (!all_finite(gamma.pre_trends) || !std::isfinite(gamma.theta1))
    throw ValidationError("reduced form entries must be finite");
}

AnticipationIncrementBounds AnticipationIncrementBounds::constant(Index num_pre, double lo,
                                                                  double hi) {
  return {Vector::Constant(num_pre, lo), Vector::Constant(num_pre, hi)};
}

TreatmentShareBounds TreatmentShareBounds::constant(Index num_pre, double lo, double hi) {
  return {Vector::Constant(num_pre + 1, lo), Vector::Constant(num_pre + 1, hi)};
}

bool TreatmentShareBounds::is_constant() const {
  return k_lo.size() > 0 && (k_lo.array() == k_lo(0)).all() && (k_hi.array() == k_hi(0)).all();
}

void validate(const AnticipationIncrementBounds& a, Index num_pre) {
  require_dims(a.lower.size(), num_pre, "anticipation increment lower bounds");
  require_dims(a.upper.size(), num_pre, "anticipation increment upper bounds");
  if (!all_finite(a.lower) || !all_finite(a.upper))
    throw ValidationError("anticipation increment bounds must be finite");
  if ((a.lower.array() > a.upper.array()).any())
    throw ValidationError("anticipation increment bounds need lower <= upper");
}

void validate(const PretrendShareBounds& p) {
  if (!std::isfinite(p.p_lo) || !std::isfinite(p.p_hi))
    throw ValidationError("pre-trend share bounds must be finite");
  if (p.p_lo > p.p_hi) throw ValidationError("pre-trend share bounds need p_lo <= p_hi");
}

void validate(const TreatmentShareBounds& k, Index num_pre) {
  require_dims(k.k_lo.size(), num_pre + 1, "treatment share lower bounds");
  require_dims(k.k_hi.size(), num_pre + 1, "treatment share upper bounds");
  if (!all_finite(k.k_lo) || !all_finite(k.k_hi))
    throw ValidationError("treatment share bounds must be finite");
  if ((k.k_lo.array() > k.k_hi.array()).any())
    throw ValidationError("treatment share bounds need k_lo <= k_hi");
}

void validate_magnitude(double m) {
  if (!std::isfinite(m) || m < 0.0)
    throw ValidationError("relative magnitude M must be finite and nonnegative");
}

const char* to_string(Parameterization p) {
  switch (p) {
    case Parameterization::increments: return "a";
    case Parameterization::pretrend_shares: return "p";
    case Parameterization::treatment_shares: return "k";
  }
  return "?";
}

Parameterization parameterization_from_string(const std::string& s) {
  if (s == "a") return Parameterization::increments;
  if (s == "p") return Parameterization::pretrend_shares;
  if (s == "k") return Parameterization::treatment_shares;
  throw ValidationError("unknown parameterization '" + s + "' (expected a, p or k)");
}

double att_decomposition(double theta1, double phi0, double delta1) {
  return theta1 + phi0 - delta1;
}

double decompose_pretrend(double delta_s, double a_s) { return delta_s - a_s; }

double anticipation_level(const Vector& increments, int s) {
  const Index S = increments.size();
  if (s < -static_cast<int>(S) || s > 0)
    throw ValidationError("anticipation level requested outside [-S, 0]");
  double phi = 0.0;
  for (Index i = 0; i < S && pre_period(i, S) <= s; ++i) phi += increments(i);
  return phi;
}

double objective_a(const ReducedForm& gamma, const Vector& a, double m, Index r_index) {
  return gamma.theta1 + a.sum() - m * (gamma.pre_trends(r_index) - a(r_index));
}

double objective_p(const ReducedForm& gamma, const Vector& p, double m, Index r_index) {
  const double dr = gamma.pre_trends(r_index);
  return gamma.theta1 + p.dot(gamma.pre_trends) - m * dr * (1.0 - p(r_index));
}

double k_denominator(const Vector& k, double m, Index r_index, Index num_pre) {
  return 1.0 - k(k_pos(0, num_pre)) - m * (k(r_index + 1) - k(r_index));
}

double objective_k(const ReducedForm& gamma, const Vector& k, double m, Index r_index) {
  const double num = gamma.theta1 - m * gamma.pre_trends(r_index);
  return num / k_denominator(k, m, r_index, gamma.num_pre());
}

std::vector<Interval> identified_set_components_a(const ReducedForm& gamma,
                                                  const AnticipationIncrementBounds& a, double m) {
  validate(gamma);
  validate(a, gamma.num_pre());
  validate_magnitude(m);
  Separable sep{a.lower, a.upper, a.lower, a.upper, {a.lower, a.upper}, {a.lower, a.upper}};
  return separable_components(gamma, sep, m);
}

std::vector<Interval> identified_set_components_p(const ReducedForm& gamma,
                                                  const PretrendShareBounds& p, double m) {
  validate(gamma);
  validate(p);
  validate_magnitude(m);
  const Index S = gamma.num_pre();
  const Vector& d = gamma.pre_trends;
  Separable sep;
  sep.base_lo.resize(S);
  sep.base_hi.resize(S);
  sep.point_lo.resize(S);
  sep.point_hi.resize(S);
  for (Index j = 0; j < S; ++j) {
    // Sign selection: the lower bound takes p_lo on nonnegative pre-trends.
    const bool nonneg = d(j) >= 0.0;
    sep.point_lo(j) = nonneg ? p.p_lo : p.p_hi;
    sep.point_hi(j) = nonneg ? p.p_hi : p.p_lo;
    sep.base_lo(j) = sep.point_lo(j) * d(j);
    sep.base_hi(j) = sep.point_hi(j) * d(j);
  }
  // |Delta_r (1 - p)| is evaluated as |Delta_r - p Delta_r|; same value, and it
  // keeps the arithmetic identical to the increment case under the share mapping.
  sep.cand_a[0] = p.p_lo * d;
  sep.cand_a[1] = p.p_hi * d;
  sep.cand_point[0] = Vector::Constant(S, p.p_lo);
  sep.cand_point[1] = Vector::Constant(S, p.p_hi);
  return separable_components(gamma, sep, m);
}

std::vector<Interval> identified_set_components_k(const ReducedForm& gamma,
                                                  const TreatmentShareBounds& k, double m) {
  validate(gamma);
  validate(k, gamma.num_pre());
  validate_magnitude(m);
  if (!check_k_feasibility(k, m)) {
    throw InfeasibleError(
        "treatment-share bounds violate the nonzero-denominator condition "
        "1 - k_0 - m(k_r - k_{r-1}) != 0 on the feasible box; the identified set is unbounded");
  }
  const Index S = gamma.num_pre();
  const Index p0 = k_pos(0, S);
  std::vector<Interval> out(static_cast<std::size_t>(S));
  for (Index i = 0; i < S; ++i) {
    Interval& iv = out[static_cast<std::size_t>(i)];
    bool first = true;
    for (const auto& v : k_vertices(k, i, S)) {
      for (double mm : {-m, m}) {
        const double f = k_ratio(gamma.theta1, gamma.pre_trends(i), v[0], v[1], v[2], mm);
        auto record = [&](Attainment& at) {
          at.r = pre_period(i, S);
          at.m = mm;
          at.point = k.k_lo;
          at.point(i) = v[2];
          at.point(i + 1) = v[1];
          at.point(p0) = v[0];
        };
        if (first || f < iv.lb) { iv.lb = f; record(iv.lb_argmin); }
        if (first || f > iv.ub) { iv.ub = f; record(iv.ub_argmax); }
        first = false;
      }
    }
  }
  return out;
}

Interval identified_set_a(const ReducedForm& gamma, const AnticipationIncrementBounds& a,
                          double m) {
  return merge(identified_set_components_a(gamma, a, m));
}

Interval identified_set_p(const ReducedForm& gamma, const PretrendShareBounds& p, double m) {
  return merge(identified_set_components_p(gamma, p, m));
}

Interval identified_set_k(const ReducedForm& gamma, const TreatmentShareBounds& k, double m) {
  return merge(identified_set_components_k(gamma, k, m));
}

AnticipationIncrementBounds increment_bounds_from_shares(const ReducedForm& gamma,
                                                         const PretrendShareBounds& p) {
  validate(p);
  const Vector lo = p.p_lo * gamma.pre_trends;
  const Vector hi = p.p_hi * gamma.pre_trends;
  return {lo.cwiseMin(hi), lo.cwiseMax(hi)};
}

bool check_k_feasibility(const TreatmentShareBounds& k, double m) {
  const Index S = k.k_lo.size() - 1;
  validate(k, S);
  validate_magnitude(m);
  if (S < 1) throw ValidationError("treatment share bounds need at least two entries");
  int sign = 0;
  for (Index i = 0; i < S; ++i) {
    for (const auto& v : k_vertices(k, i, S)) {
      for (double mm : {-m, m}) {
        const double den = 1.0 - v[0] - mm * (v[1] - v[2]);
        if (std::abs(den) < kDenominatorTol) return false;
        const int s = den > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign) return false;
      }
    }
  }
  return true;
}

double symmetric_k_threshold(double m) {
  validate_magnitude(m);
  return 1.0 / (1.0 + 2.0 * m);
}

double nonnegative_k_threshold(double m) {
  validate_magnitude(m);
  return 1.0 / (1.0 + m);
}

const char* to_string(ThreePeriodCase c) {
  switch (c) {
    case ThreePeriodCase::same_lower: return "same_lower";
    case ThreePeriodCase::same_upper: return "same_upper";
    case ThreePeriodCase::cross: return "cross";
  }
  return "?";
}

ThreePeriodResult classify_three_period_case(const ReducedForm& gamma,
                                             const AnticipationIncrementBounds& a, double m) {
  validate(gamma);
  if (gamma.num_pre() != 1)
    throw ValidationError("three-period classification needs exactly one pre-trend");
  validate(a, 1);
  validate_magnitude(m);

  const double d = gamma.pre_trends(0);
  const double lo = a.lower(0), hi = a.upper(0);
  ThreePeriodCase which = ThreePeriodCase::cross;
  if (m > 0.0) {
    const double c_l = (lo * (1.0 + m) - hi * (1.0 - m)) / (2.0 * m);
    const double c_u = (hi * (1.0 + m) - lo * (1.0 - m)) / (2.0 * m);
    const bool inside = lo <= d && d <= hi;
    if ((hi <= d && m >= 1.0) || (inside && d > c_u && m > 1.0)) {
      which = ThreePeriodCase::same_lower;
    } else if ((lo >= d && m >= 1.0) || (inside && d < c_l && m > 1.0)) {
      which = ThreePeriodCase::same_upper;
    }
  }

  const double at_lb = which == ThreePeriodCase::same_upper ? hi : lo;
  const double at_ub = which == ThreePeriodCase::same_lower ? lo : hi;
  Interval iv;
  iv.lb = gamma.theta1 + at_lb - m * std::abs(d - at_lb);
  iv.ub = gamma.theta1 + at_ub + m * std::abs(d - at_ub);
  iv.lb_argmin = {0, d - at_lb >= 0.0 ? m : -m, Vector::Constant(1, at_lb)};
  iv.ub_argmax = {0, d - at_ub >= 0.0 ? -m : m, Vector::Constant(1, at_ub)};
  return {which, iv};
}

WidthComparison width_comparison(const ReducedForm& gamma, const AnticipationIncrementBounds& a,
                                 double m) {
  validate_magnitude(m);
  if (m == 0.0) throw ValidationError("width comparison needs M > 0");
  const ThreePeriodResult c = classify_three_period_case(gamma, a, m);
  const double d = gamma.pre_trends(0);
  const double lo = a.lower(0), hi = a.upper(0);
  WidthComparison w;
  w.w_pt = 2.0 * m * std::abs(d);
  switch (c.which) {
    case ThreePeriodCase::same_lower: w.w_ptae = 2.0 * m * std::abs(d - lo); break;
    case ThreePeriodCase::same_upper: w.w_ptae = 2.0 * m * std::abs(d - hi); break;
    case ThreePeriodCase::cross:
      w.w_ptae = (hi - lo) + m * (std::abs(d - hi) + std::abs(d - lo));
      break;
  }
  w.shorter = w.w_ptae < w.w_pt;
  return w;
}

}  // namespace didsens
