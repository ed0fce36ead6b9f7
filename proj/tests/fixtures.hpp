#pragma once

#include "didsens/types.hpp"

namespace didsens::testing {

// Posterior medians of the two pre-trends and the first post-period effect
// from the minimum-wage application.
inline ReducedForm table_gamma() {
  ReducedForm g;
  g.pre_trends.resize(2);
  g.pre_trends << -0.0523, -0.0225;
  g.theta1 = -0.0260;
  return g;
}

inline ReducedForm make_gamma(std::initializer_list<double> pre, double theta) {
  ReducedForm g;
  g.pre_trends.resize(static_cast<Index>(pre.size()));
  Index i = 0;
  for (double d : pre) g.pre_trends(i++) = d;
  g.theta1 = theta;
  return g;
}

}  // namespace didsens::testing
