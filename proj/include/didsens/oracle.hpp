#pragma once

#include "didsens/rng.hpp"
#include "didsens/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace didsens {

using AnticipationBounds =
    std::variant<AnticipationIncrementBounds, PretrendShareBounds, TreatmentShareBounds>;

Parameterization parameterization_of(const AnticipationBounds& bounds);
Interval closed_form_interval(const ReducedForm& gamma, const AnticipationBounds& bounds, double m);

inline constexpr Index kDefaultLatticeDensity = 101;

// Lattice extremes of the objective over box x [-M, M] x r. Every axis uses
// `density` evenly spaced points including both ends.
Interval grid_extremes_a(const ReducedForm& gamma, const AnticipationIncrementBounds& a, double m,
                         Index density = kDefaultLatticeDensity);
Interval grid_extremes_p(const ReducedForm& gamma, const PretrendShareBounds& p, double m,
                         Index density = kDefaultLatticeDensity);
Interval grid_extremes_k(const ReducedForm& gamma, const TreatmentShareBounds& k, double m,
                         Index density = kDefaultLatticeDensity);
Interval grid_extremes(const ReducedForm& gamma, const AnticipationBounds& bounds, double m,
                       Index density = kDefaultLatticeDensity);

// Conditional means of a DGP matching gamma whose ATT_1 equals tau. Period
// vectors run over t = -S..1 (S+2 entries) unless noted.
struct DgpSpec {
  Parameterization parameterization = Parameterization::increments;
  double tau = 0.0;
  int r = 0;        // pre-trend period tying delta_1 to delta_r
  double m = 0.0;   // delta_1 = m * delta_r
  Vector parameter; // A_s, p_s (S entries) or k_s (S+1 entries) realizing tau

  Vector untreated_means;       // E[Y_t | X = 0]
  Vector treated_means;         // E[Y_t | X = 1]
  Vector counterfactual_means;  // E[Y_t(0) | X = 1]
  Vector untreated_trends;      // c_t, t = -(S-1)..1
  Vector phi;                   // t = -S..0
  Vector delta;                 // t = -(S-1)..1
};

struct DgpOptions {
  double treated_baseline = 1.5;    // E[Y_{-S} | X = 1]
  double untreated_baseline = 1.0;  // E[Y_{-S} | X = 0]
  Vector untreated_trends;          // empty: 0.05, 0.10, ...
};

DgpSpec construct_sharp_dgp(const ReducedForm& gamma, double tau, const AnticipationBounds& bounds,
                            double m, const DgpOptions& options = {});

struct Verification {
  bool ok = true;
  std::vector<std::string> reasons;
  explicit operator bool() const { return ok; }
};

Verification verify_dgp(const DgpSpec& spec, const ReducedForm& gamma,
                        const AnticipationBounds& bounds, double m);

// Random instances used by the agreement checks and the CLI diagnostics.
struct RandomInstance {
  ReducedForm gamma;
  AnticipationBounds bounds;
  double m = 0.0;
};

RandomInstance random_instance(Parameterization p, Index num_pre, CounterStream& rng);

}  // namespace didsens
