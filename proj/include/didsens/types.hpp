#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace didsens {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad input or violated precondition (CLI exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bounds that would make the identified set unbounded (exit code 2).
class InfeasibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// File system or stream failure (exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result failed an internal consistency check (exit code 4).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// gamma = (Delta_{-(S-1)}, ..., Delta_0, theta_1). Position i of pre_trends
// holds period s = i - (S - 1).
struct ReducedForm {
  Vector pre_trends;
  double theta1 = 0.0;

  Index num_pre() const { return pre_trends.size(); }
};

void validate(const ReducedForm& gamma);

inline int pre_period(Index i, Index num_pre) {
  return static_cast<int>(i - (num_pre - 1));
}

// Bounds on A_s = phi_s - phi_{s-1}, one entry per pre-trend period.
struct AnticipationIncrementBounds {
  Vector lower;
  Vector upper;

  static AnticipationIncrementBounds constant(Index num_pre, double lo, double hi);
};

// A_s = p_s * Delta_s with p_s in [p_lo, p_hi].
struct PretrendShareBounds {
  double p_lo = 0.0;
  double p_hi = 0.0;
};

// phi_s = k_s * ATT with k_s in [k_lo_s, k_hi_s]; position i holds s = i - S.
struct TreatmentShareBounds {
  Vector k_lo;
  Vector k_hi;

  static TreatmentShareBounds constant(Index num_pre, double lo, double hi);
  bool is_constant() const;
};

void validate(const AnticipationIncrementBounds& a, Index num_pre);
void validate(const PretrendShareBounds& p);
void validate(const TreatmentShareBounds& k, Index num_pre);
void validate_magnitude(double m);

enum class Parameterization { increments, pretrend_shares, treatment_shares };

const char* to_string(Parameterization p);
Parameterization parameterization_from_string(const std::string& s);

// Where an endpoint is attained: the pre-trend period r used by the
// relative-magnitude bound, the multiplier m in [-M, M], and the full
// anticipation parameter (A_s, p_s, or k_s depending on the case).
struct Attainment {
  int r = 0;
  double m = 0.0;
  Vector point;
};

struct Interval {
  double lb = 0.0;
  double ub = 0.0;
  Attainment lb_argmin;
  Attainment ub_argmax;

  double width() const { return ub - lb; }
  bool contains(double x, double tol = 0.0) const { return x >= lb - tol && x <= ub + tol; }
};

}  // namespace didsens
