#include "didsens/oracle.hpp"

#include "didsens/core_bounds.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <functional>

namespace didsens {

namespace {

std::vector<double> axis_points(double lo, double hi, Index density) {
  if (lo == hi) return {lo};
  std::vector<double> v(static_cast<std::size_t>(density));
  for (Index i = 0; i < density; ++i) {
    v[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(density - 1);
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Sweeps every lattice point of prod(axes) x m_axis x r and keeps extremes.
// eval may throw to abort the sweep.
using Eval = std::function<double(const Vector& x, double m, Index r)>;

Interval lattice_extremes(const std::vector<std::vector<double>>& axes,
                          const std::vector<double>& m_axis, Index num_pre, const Eval& eval) {
  const std::size_t D = axes.size();
  std::vector<std::size_t> idx(D, 0);
  Vector x(static_cast<Index>(D));
  Interval out;
  bool first = true;
  while (true) {
    for (std::size_t d = 0; d < D; ++d) x(static_cast<Index>(d)) = axes[d][idx[d]];
    for (double m : m_axis) {
      for (Index r = 0; r < num_pre; ++r) {
        const double f = eval(x, m, r);
        if (first || f < out.lb) { out.lb = f; out.lb_argmin = {pre_period(r, num_pre), m, x}; }
        if (first || f > out.ub) { out.ub = f; out.ub_argmax = {pre_period(r, num_pre), m, x}; }
        first = false;
      }
    }
    std::size_t d = 0;
    while (d < D && ++idx[d] == axes[d].size()) idx[d++] = 0;
    if (d == D) break;
  }
  return out;
}

void check_density(Index density) {
  if (density < 2) throw ValidationError("lattice density must be at least 2");
}

}  // namespace

Parameterization parameterization_of(const AnticipationBounds& bounds) {
  switch (bounds.index()) {
    case 0: return Parameterization::increments;
    case 1: return Parameterization::pretrend_shares;
    default: return Parameterization::treatment_shares;
  }
}

Interval closed_form_interval(const ReducedForm& gamma, const AnticipationBounds& bounds, double m) {
  return std::visit(
      [&](const auto& b) -> Interval {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnticipationIncrementBounds>) return identified_set_a(gamma, b, m);
        else if constexpr (std::is_same_v<T, PretrendShareBounds>) return identified_set_p(gamma, b, m);
        else return identified_set_k(gamma, b, m);
      },
      bounds);
}

Interval grid_extremes_a(const ReducedForm& gamma, const AnticipationIncrementBounds& a, double m,
                         Index density) {
  validate(gamma);
  validate(a, gamma.num_pre());
  validate_magnitude(m);
  check_density(density);
  std::vector<std::vector<double>> axes;
  for (Index s = 0; s < gamma.num_pre(); ++s) axes.push_back(axis_points(a.lower(s), a.upper(s), density));
  return lattice_extremes(axes, axis_points(-m, m, density), gamma.num_pre(),
                          [&](const Vector& x, double mm, Index r) { return objective_a(gamma, x, mm, r); });
}

Interval grid_extremes_p(const ReducedForm& gamma, const PretrendShareBounds& p, double m,
                         Index density) {
  validate(gamma);
  validate(p);
  validate_magnitude(m);
  check_density(density);
  // Each period has its own share p_s in [p_lo, p_hi].
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(gamma.num_pre()),
                                        axis_points(p.p_lo, p.p_hi, density));
  return lattice_extremes(axes, axis_points(-m, m, density), gamma.num_pre(),
                          [&](const Vector& x, double mm, Index r) { return objective_p(gamma, x, mm, r); });
}

Interval grid_extremes_k(const ReducedForm& gamma, const TreatmentShareBounds& k, double m,
                         Index density) {
  validate(gamma);
  validate(k, gamma.num_pre());
  validate_magnitude(m);
  check_density(density);
  const Index S = gamma.num_pre();
  std::vector<std::vector<double>> axes;
  for (Index s = 0; s <= S; ++s) axes.push_back(axis_points(k.k_lo(s), k.k_hi(s), density));
  int sign = 0;
  return lattice_extremes(axes, axis_points(-m, m, density), S, [&](const Vector& x, double mm, Index r) {
    const double den = k_denominator(x, mm, r, S);
    const int s = den > 0.0 ? 1 : -1;
    if (std::abs(den) < 1e-12 || (sign != 0 && s != sign))
      throw InfeasibleError("lattice point violates the nonzero-denominator condition");
    sign = s;
    return (gamma.theta1 - mm * gamma.pre_trends(r)) / den;
  });
}

Interval grid_extremes(const ReducedForm& gamma, const AnticipationBounds& bounds, double m,
                       Index density) {
  return std::visit(
      [&](const auto& b) -> Interval {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnticipationIncrementBounds>) return grid_extremes_a(gamma, b, m, density);
        else if constexpr (std::is_same_v<T, PretrendShareBounds>) return grid_extremes_p(gamma, b, m, density);
        else return grid_extremes_k(gamma, b, m, density);
      },
      bounds);
}

namespace {

struct PathPoint {
  Vector x;
  double m = 0.0;
};

std::vector<Interval> components(const ReducedForm& gamma, const AnticipationBounds& bounds, double m) {
  return std::visit(
      [&](const auto& b) -> std::vector<Interval> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnticipationIncrementBounds>) return identified_set_components_a(gamma, b, m);
        else if constexpr (std::is_same_v<T, PretrendShareBounds>) return identified_set_components_p(gamma, b, m);
        else return identified_set_components_k(gamma, b, m);
      },
      bounds);
}

double evaluate(const ReducedForm& gamma, Parameterization p, const PathPoint& pt, Index r) {
  switch (p) {
    case Parameterization::increments: return objective_a(gamma, pt.x, pt.m, r);
    case Parameterization::pretrend_shares: return objective_p(gamma, pt.x, pt.m, r);
    case Parameterization::treatment_shares: return objective_k(gamma, pt.x, pt.m, r);
  }
  return 0.0;
}

PathPoint lerp(const PathPoint& a, const PathPoint& b, double t) {
  return {a.x + t * (b.x - a.x), a.m + t * (b.m - a.m)};
}

// Root of f(lambda) = tau on a leg where f is monotone and brackets tau.
// A closed-form guess comes first; bisection covers rounding trouble.
PathPoint solve_leg(const ReducedForm& gamma, Parameterization p, Index r, const PathPoint& a,
                    const PathPoint& b, double fa, double fb, double tau, double tol) {
  auto f_at = [&](double t) { return evaluate(gamma, p, lerp(a, b, t), r); };
  double guess = std::numeric_limits<double>::quiet_NaN();
  if (p != Parameterization::treatment_shares) {
    // Both leg types are affine in lambda for the separable objectives.
    if (fb != fa) guess = (tau - fa) / (fb - fa);
  } else if (a.m != b.m) {
    const Index S = gamma.num_pre();
    const double k0 = a.x(S), dk = a.x(r + 1) - a.x(r);
    const double den = gamma.pre_trends(r) - tau * dk;
    if (den != 0.0) {
      const double m_star = (gamma.theta1 - tau * (1.0 - k0)) / den;
      guess = (m_star - a.m) / (b.m - a.m);
    }
  } else if (tau != 0.0) {
    const Index S = gamma.num_pre();
    const double k0_star = 1.0 - gamma.theta1 / tau;
    if (b.x(S) != a.x(S)) guess = (k0_star - a.x(S)) / (b.x(S) - a.x(S));
  }
  if (std::isfinite(guess) && guess >= -1e-12 && guess <= 1.0 + 1e-12) {
    const double t = std::clamp(guess, 0.0, 1.0);
    if (std::abs(f_at(t) - tau) <= tol) return lerp(a, b, t);
  }
  double lo = 0.0, hi = 1.0;
  const bool increasing = fb >= fa;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f_at(mid);
    if ((fm < tau) == increasing) lo = mid; else hi = mid;
  }
  const double flo = f_at(lo), fhi = f_at(hi);
  return lerp(a, b, std::abs(flo - tau) <= std::abs(fhi - tau) ? lo : hi);
}

double problem_scale(const ReducedForm& gamma, const Interval& iv) {
  return 1.0 + std::abs(gamma.theta1) + gamma.pre_trends.cwiseAbs().sum() + std::abs(iv.lb) +
         std::abs(iv.ub);
}

}  // namespace

DgpSpec construct_sharp_dgp(const ReducedForm& gamma, double tau, const AnticipationBounds& bounds,
                            double m, const DgpOptions& options) {
  const Parameterization param = parameterization_of(bounds);
  const std::vector<Interval> comps = components(gamma, bounds, m);
  Interval whole = comps.front();
  for (const Interval& c : comps) {
    whole.lb = std::min(whole.lb, c.lb);
    whole.ub = std::max(whole.ub, c.ub);
  }
  const double tol = 1e-12 * problem_scale(gamma, whole);
  if (!std::isfinite(tau) || tau < whole.lb - tol || tau > whole.ub + tol) {
    throw ValidationError("target lies outside the identified set [" + std::to_string(whole.lb) +
                          ", " + std::to_string(whole.ub) + "]");
  }

  const Index S = gamma.num_pre();
  Index r = 0;
  while (r < S && !comps[static_cast<std::size_t>(r)].contains(tau, tol)) ++r;
  if (r == S) throw InvariantError("no component of the identified set contains the target");
  const Interval& comp = comps[static_cast<std::size_t>(r)];

  // Path: lb corner -> same parameter at m = 0 -> ub parameter at m = 0 -> ub corner.
  const std::array<PathPoint, 4> path{PathPoint{comp.lb_argmin.point, comp.lb_argmin.m},
                                      PathPoint{comp.lb_argmin.point, 0.0},
                                      PathPoint{comp.ub_argmax.point, 0.0},
                                      PathPoint{comp.ub_argmax.point, comp.ub_argmax.m}};
  std::array<double, 4> f{};
  for (std::size_t i = 0; i < 4; ++i) f[i] = evaluate(gamma, param, path[i], r);

  PathPoint chosen;
  bool found = false;
  for (std::size_t i = 0; i < 4 && !found; ++i) {
    if (std::abs(f[i] - tau) <= tol) {
      chosen = path[i];
      found = true;
    }
  }
  for (std::size_t i = 0; i < 3 && !found; ++i) {
    if ((f[i] - tau) * (f[i + 1] - tau) <= 0.0) {
      chosen = solve_leg(gamma, param, r, path[i], path[i + 1], f[i], f[i + 1], tau, tol);
      found = true;
    }
  }
  if (!found) throw InvariantError("sharpness path does not bracket the target");

  DgpSpec spec;
  spec.parameterization = param;
  spec.tau = tau;
  spec.r = pre_period(r, S);
  spec.m = chosen.m;
  spec.parameter = chosen.x;

  // Anticipation path phi_{-S..0} and implied violations delta_{-(S-1)..1}.
  spec.phi = Vector::Zero(S + 1);
  if (param == Parameterization::treatment_shares) {
    spec.phi = chosen.x * tau;
  } else {
    const Vector inc = param == Parameterization::increments
                           ? chosen.x
                           : Vector(chosen.x.cwiseProduct(gamma.pre_trends));
    for (int s = -static_cast<int>(S) + 1; s <= 0; ++s)
      spec.phi(s + S) = anticipation_level(inc, s);
  }
  spec.delta.resize(S + 1);
  for (Index i = 0; i < S; ++i)
    spec.delta(i) = decompose_pretrend(gamma.pre_trends(i), spec.phi(i + 1) - spec.phi(i));
  spec.delta(S) = chosen.m * spec.delta(r);

  spec.untreated_trends = options.untreated_trends;
  if (spec.untreated_trends.size() == 0) {
    spec.untreated_trends = Vector::LinSpaced(S + 1, 0.05, 0.05 * static_cast<double>(S + 1));
  }
  if (spec.untreated_trends.size() != S + 1)
    throw ValidationError("untreated trends need one entry per period change");

  const Index T = S + 2;
  spec.untreated_means.resize(T);
  spec.treated_means.resize(T);
  spec.counterfactual_means.resize(T);
  spec.untreated_means(0) = options.untreated_baseline;
  spec.treated_means(0) = options.treated_baseline;
  spec.counterfactual_means(0) = options.treated_baseline - spec.phi(0);
  for (Index t = 1; t < T; ++t) {
    const double c = spec.untreated_trends(t - 1);
    const double observed_gap = t <= S ? gamma.pre_trends(t - 1) : gamma.theta1;
    spec.untreated_means(t) = spec.untreated_means(t - 1) + c;
    spec.treated_means(t) = spec.treated_means(t - 1) + c + observed_gap;
    spec.counterfactual_means(t) = spec.counterfactual_means(t - 1) + c + spec.delta(t - 1);
  }
  return spec;
}

Verification verify_dgp(const DgpSpec& spec, const ReducedForm& gamma,
                        const AnticipationBounds& bounds, double m) {
  Verification v;
  auto fail = [&](const std::string& reason) {
    v.ok = false;
    v.reasons.push_back(reason);
  };
  const Index S = gamma.num_pre();
  const Index T = S + 2;
  if (spec.untreated_means.size() != T || spec.treated_means.size() != T ||
      spec.counterfactual_means.size() != T) {
    fail("malformed spec: mean vectors need S + 2 entries");
    return v;
  }
  const double scale = std::max({1.0, spec.treated_means.cwiseAbs().maxCoeff(),
                                 spec.untreated_means.cwiseAbs().maxCoeff(),
                                 spec.counterfactual_means.cwiseAbs().maxCoeff(), std::abs(spec.tau)});
  const double tol = 1e-10 * scale;
  const Vector& y1 = spec.treated_means;
  const Vector& y0 = spec.untreated_means;
  const Vector& cf = spec.counterfactual_means;

  // (i) observable moments
  for (Index t = 1; t < T; ++t) {
    const double gap = (y1(t) - y1(t - 1)) - (y0(t) - y0(t - 1));
    const double want = t <= S ? gamma.pre_trends(t - 1) : gamma.theta1;
    if (std::abs(gap - want) > tol) {
      fail("(i) implied " + std::string(t <= S ? "pre-trend" : "theta1") + " at period " +
           std::to_string(t - S) + " does not match gamma");
    }
  }

  // (ii) anticipation within bounds
  Vector phi(S + 1);
  for (Index t = 0; t <= S; ++t) phi(t) = y1(t) - cf(t);
  const double att = y1(T - 1) - cf(T - 1);
  const Parameterization param = parameterization_of(bounds);
  if (param != Parameterization::treatment_shares && std::abs(phi(0)) > tol)
    fail("(ii) anticipation in the first period is not zero");
  if (const auto* a = std::get_if<AnticipationIncrementBounds>(&bounds)) {
    for (Index i = 0; i < S; ++i) {
      const double inc = phi(i + 1) - phi(i);
      if (inc < a->lower(i) - tol || inc > a->upper(i) + tol)
        fail("(ii) anticipation increment at period " + std::to_string(pre_period(i, S)) + " outside bounds");
    }
  } else if (const auto* p = std::get_if<PretrendShareBounds>(&bounds)) {
    for (Index i = 0; i < S; ++i) {
      const double inc = phi(i + 1) - phi(i);
      const double lo = std::min(p->p_lo * gamma.pre_trends(i), p->p_hi * gamma.pre_trends(i));
      const double hi = std::max(p->p_lo * gamma.pre_trends(i), p->p_hi * gamma.pre_trends(i));
      if (inc < lo - tol || inc > hi + tol)
        fail("(ii) anticipation increment at period " + std::to_string(pre_period(i, S)) +
             " is not a feasible share of the pre-trend");
    }
  } else {
    const auto& k = std::get<TreatmentShareBounds>(bounds);
    if (!check_k_feasibility(k, m)) fail("(ii) treatment share bounds violate the nonzero-denominator condition");
    for (Index s = 0; s <= S; ++s) {
      if (std::abs(att) <= tol) {
        if (std::abs(phi(s)) > tol) fail("(ii) nonzero anticipation with zero treatment effect");
      } else {
        const double share = phi(s) / att;
        const double share_tol = tol / std::abs(att);
        if (share < k.k_lo(s) - share_tol || share > k.k_hi(s) + share_tol)
          fail("(ii) treatment share at period " + std::to_string(s - S) + " outside bounds");
      }
    }
  }

  // (iii) relative magnitude
  Vector delta(S + 1);
  for (Index t = 1; t < T; ++t) delta(t - 1) = (cf(t) - cf(t - 1)) - (y0(t) - y0(t - 1));
  const double pre_max = delta.head(S).cwiseAbs().maxCoeff();
  if (std::abs(delta(S)) > m * pre_max + tol) fail("(iii) post-period violation exceeds M times the largest pre-period violation");

  // (iv) Lemma-1 decomposition reproduces the target
  const double decomposed = att_decomposition(gamma.theta1, phi(S), delta(S));
  if (std::abs(decomposed - spec.tau) > tol || std::abs(att - spec.tau) > tol)
    fail("(iv) theta1 + phi_0 - delta_1 differs from the target");
  return v;
}

RandomInstance random_instance(Parameterization p, Index num_pre, CounterStream& rng) {
  if (num_pre < 1) throw ValidationError("random instance needs S >= 1");
  RandomInstance inst;
  inst.gamma.pre_trends.resize(num_pre);
  for (Index s = 0; s < num_pre; ++s) inst.gamma.pre_trends(s) = rng.uniform(-1.0, 1.0);
  inst.gamma.theta1 = rng.uniform(-1.0, 1.0);
  const bool zero_m = rng.uniform() < 0.1;
  switch (p) {
    case Parameterization::increments: {
      inst.m = zero_m ? 0.0 : rng.uniform(0.0, 3.0);
      AnticipationIncrementBounds a{Vector(num_pre), Vector(num_pre)};
      for (Index s = 0; s < num_pre; ++s) {
        a.lower(s) = rng.uniform(-1.0, 1.0);
        a.upper(s) = rng.uniform() < 0.1 ? a.lower(s) : a.lower(s) + rng.uniform(0.0, 1.0);
      }
      inst.bounds = a;
      break;
    }
    case Parameterization::pretrend_shares: {
      inst.m = zero_m ? 0.0 : rng.uniform(0.0, 3.0);
      const double lo = rng.uniform(-0.5, 1.5);
      inst.bounds = PretrendShareBounds{lo, rng.uniform() < 0.1 ? lo : lo + rng.uniform(0.0, 1.0)};
      break;
    }
    case Parameterization::treatment_shares: {
      inst.m = zero_m ? 0.0 : rng.uniform(0.0, 2.0);
      const double K = 0.95 * symmetric_k_threshold(inst.m);
      TreatmentShareBounds k{Vector(num_pre + 1), Vector(num_pre + 1)};
      for (Index s = 0; s <= num_pre; ++s) {
        k.k_lo(s) = rng.uniform(-K, K);
        k.k_hi(s) = rng.uniform() < 0.1 ? k.k_lo(s) : rng.uniform(k.k_lo(s), K);
      }
      inst.bounds = k;
      break;
    }
  }
  return inst;
}

}  // namespace didsens
