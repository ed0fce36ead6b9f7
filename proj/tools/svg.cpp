#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace didsens::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart(const std::vector<double>& x, const std::vector<Series>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label, double y_cap) {
  double x_lo = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double x_hi = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  double y_lo = 0.0, y_hi = 0.0;
  for (const Series& s : series) {
    for (double v : s.y) {
      if (std::isnan(v)) continue;
      const double c = std::min(v, y_cap);
      y_lo = std::min(y_lo, c);
      y_hi = std::max(y_hi, c);
    }
  }
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (std::min(v, y_cap) - y_lo) / (y_hi - y_lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << label_num(xv) << "</text>\n";
    out << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << label_num(yv) << "</text>\n";
  }
  out << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 18)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  int legend = 0;
  for (const Series& s : series) {
    std::string pts;
    auto flush = [&]() {
      if (!pts.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"" << pts
            << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
      if (std::isnan(s.y[i])) {
        flush();
        continue;
      }
      pts += (pts.empty() ? "" : " ") + fmt(px(x[i])) + "," + fmt(py(s.y[i]));
    }
    flush();
    const double ly = kTop + 14 + 16 * legend++;
    out << "<line x1=\"" << fmt(kLeft + 10) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(kLeft + 30)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(kLeft + 36) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace didsens::cli
