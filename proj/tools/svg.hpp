#pragma once

#include <string>
#include <vector>

namespace didsens::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

// Static line chart. Values above y_cap (including +inf) are drawn at the cap;
// NaN values break the line.
std::string line_chart(const std::vector<double>& x, const std::vector<Series>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label, double y_cap);

}  // namespace didsens::cli
