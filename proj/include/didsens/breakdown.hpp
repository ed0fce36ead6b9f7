#pragma once

#include "didsens/types.hpp"

#include <string>
#include <vector>

namespace didsens {

struct Conclusion {
  enum class Kind { att_negative, att_above_threshold };

  Kind kind = Kind::att_negative;
  double tau = 0.0;

  static Conclusion negative() { return {Kind::att_negative, 0.0}; }
  static Conclusion above(double tau) { return {Kind::att_above_threshold, tau}; }

  double threshold() const { return kind == Kind::att_negative ? 0.0 : tau; }
  // Whether every point of the identified set supports the conclusion.
  bool holds(const Interval& identified) const;
};

// (lo, hi) pair of a sensitivity-parameter box: (p_lo, p_hi) or (k_lo, k_hi).
struct SensitivityPoint {
  double lo = 0.0;
  double hi = 0.0;
};

enum class PointFlag { finite, unbounded, invalid };

const char* to_string(PointFlag f);

struct FrontierGrid {
  std::vector<SensitivityPoint> axis;
  std::vector<double> values;  // +inf where unbounded, NaN where invalid
  std::vector<PointFlag> flags;
  std::vector<std::string> errors;  // empty unless flag is invalid
};

double frontier_p_sign(const ReducedForm& gamma, const PretrendShareBounds& p);
double frontier_p_threshold(const ReducedForm& gamma, const PretrendShareBounds& p,
                            const Conclusion& c);

// Supremum of admissible M for the k box (the endpoint itself is excluded).
double m_max_k(double k_lo, double k_hi);
double m_max_k(const TreatmentShareBounds& k);

// Breakdown value for ATT > tau.
double frontier_k_threshold(const ReducedForm& gamma, const TreatmentShareBounds& k, double tau);
// Either conclusion kind; the ATT < 0 case mirrors the corner formulas.
double frontier_k(const ReducedForm& gamma, const TreatmentShareBounds& k, const Conclusion& c);

FrontierGrid frontier_grid(const ReducedForm& gamma, const std::vector<SensitivityPoint>& axis,
                           const Conclusion& c, Parameterization parameterization);

// Evenly spaced axes; count includes both ends.
std::vector<SensitivityPoint> axis_vary_lower(double from, double to, Index count, double hi);
std::vector<SensitivityPoint> axis_vary_upper(double lo, double from, double to, Index count);
std::vector<SensitivityPoint> axis_diagonal(double from, double to, Index count);

bool robust_region_membership(double m, double breakdown_value);
bool robust_region_membership(const ReducedForm& gamma, const PretrendShareBounds& p, double m,
                              const Conclusion& c);

// Replaces values above the cap (including +inf) by the cap. Only for
// consumers that need finite numbers; flags are left untouched.
FrontierGrid cap_frontier(FrontierGrid grid, double cap = 100.0);

}  // namespace didsens
