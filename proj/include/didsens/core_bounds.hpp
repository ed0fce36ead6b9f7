#pragma once

#include "didsens/types.hpp"

#include <vector>

namespace didsens {

double att_decomposition(double theta1, double phi0, double delta1);

// delta_s = Delta_s - A_s.
double decompose_pretrend(double delta_s, double a_s);

// phi_s = sum_{j <= s} A_j with phi_{-S} = 0. increments are ordered
// -(S-1)..0 and s must lie in [-S, 0].
double anticipation_level(const Vector& increments, int s);

// Objectives over a single feasible point. r_index is the position of the
// pre-trend used in the relative-magnitude bound.
double objective_a(const ReducedForm& gamma, const Vector& a, double m, Index r_index);
double objective_p(const ReducedForm& gamma, const Vector& p, double m, Index r_index);
double objective_k(const ReducedForm& gamma, const Vector& k, double m, Index r_index);
double k_denominator(const Vector& k, double m, Index r_index, Index num_pre);

// Per-r intervals [LB(r), UB(r)]; the identified set is their union.
std::vector<Interval> identified_set_components_a(const ReducedForm& gamma,
                                                  const AnticipationIncrementBounds& a, double m);
std::vector<Interval> identified_set_components_p(const ReducedForm& gamma,
                                                  const PretrendShareBounds& p, double m);
std::vector<Interval> identified_set_components_k(const ReducedForm& gamma,
                                                  const TreatmentShareBounds& k, double m);

Interval identified_set_a(const ReducedForm& gamma, const AnticipationIncrementBounds& a, double m);
Interval identified_set_p(const ReducedForm& gamma, const PretrendShareBounds& p, double m);
Interval identified_set_k(const ReducedForm& gamma, const TreatmentShareBounds& k, double m);

// Increment bounds implied by share bounds: [min, max] of {p_lo*Delta_s, p_hi*Delta_s}.
AnticipationIncrementBounds increment_bounds_from_shares(const ReducedForm& gamma,
                                                         const PretrendShareBounds& p);

// Vertex test of 1 - k_0 - m(k_r - k_{r-1}) != 0 over the box times [-M, M].
bool check_k_feasibility(const TreatmentShareBounds& k, double m);

double symmetric_k_threshold(double m);    // sup K for k_s in [-K, K]
double nonnegative_k_threshold(double m);  // sup K for k_s in [0, K]

enum class ThreePeriodCase {
  same_lower,  // both endpoints at A_lo
  same_upper,  // both endpoints at A_hi
  cross,       // lb at A_lo, ub at A_hi
};

const char* to_string(ThreePeriodCase c);

struct ThreePeriodResult {
  ThreePeriodCase which;
  Interval interval;
};

ThreePeriodResult classify_three_period_case(const ReducedForm& gamma,
                                             const AnticipationIncrementBounds& a, double m);

struct WidthComparison {
  double w_pt = 0.0;
  double w_ptae = 0.0;
  bool shorter = false;
};

WidthComparison width_comparison(const ReducedForm& gamma, const AnticipationIncrementBounds& a,
                                 double m);

}  // namespace didsens
