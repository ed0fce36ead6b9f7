#include "didsens/quantile.hpp"

#include "didsens/types.hpp"

#include <algorithm>
#include <cmath>

namespace didsens {

namespace {
void check(const std::vector<double>& v, double q) {
  if (v.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
}
}  // namespace

double quantile_linear_sorted(const std::vector<double>& sorted, double q) {
  check(sorted, q);
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double w = h - static_cast<double>(lo);
  if (w == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  const double a = sorted[lo], b = sorted[lo + 1];
  if (a == b) return a;
  return a + w * (b - a);
}

double quantile_linear(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_linear_sorted(values, q);
}

double quantile_inverse_ecdf_sorted(const std::vector<double>& sorted, double q) {
  check(sorted, q);
  const double n = static_cast<double>(sorted.size());
  // Guard against (1 - alpha) * n landing a hair above an integer.
  double rank = std::ceil(q * n - 1e-9);
  rank = std::clamp(rank, 1.0, n);
  return sorted[static_cast<std::size_t>(rank) - 1];
}

double quantile_inverse_ecdf(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_inverse_ecdf_sorted(values, q);
}

}  // namespace didsens
