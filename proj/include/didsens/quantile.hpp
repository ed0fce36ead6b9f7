#pragma once

#include <vector>

namespace didsens {

// Linear interpolation between order statistics (type 7): h = (n-1) q.
// Values may contain +inf; an interpolation weight of zero never touches
// the neighbouring order statistic, so no NaN arises from 0 * inf.
double quantile_linear(std::vector<double> values, double q);
double quantile_linear_sorted(const std::vector<double>& sorted, double q);

// Inverse empirical CDF: smallest x with F_n(x) >= q, i.e. the order
// statistic of rank ceil(n q). Used for critical values so that the share
// of draws at or below the result is at least q.
double quantile_inverse_ecdf(std::vector<double> values, double q);
double quantile_inverse_ecdf_sorted(const std::vector<double>& sorted, double q);

}  // namespace didsens
