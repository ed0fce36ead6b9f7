#include "didsens/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace didsens {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "Inf" || s == "infinity") return kInf;
  if (s == "-inf" || s == "-Inf" || s == "-infinity") return -kInf;
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last)
    throw ValidationError("cannot parse number '" + s + "'");
  return v;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json to_json(const ReducedForm& gamma) {
  json pre = json::array();
  for (Index i = 0; i < gamma.num_pre(); ++i) pre.push_back(gamma.pre_trends(i));
  return json{{"pre_trends", pre}, {"theta1", gamma.theta1}};
}

ReducedForm reduced_form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pre_trends") || !j.contains("theta1"))
    throw ValidationError("reduced form JSON needs \"pre_trends\" and \"theta1\"");
  const json& pre = j.at("pre_trends");
  if (!pre.is_array()) throw ValidationError("\"pre_trends\" must be an array");
  ReducedForm g;
  g.pre_trends.resize(static_cast<Index>(pre.size()));
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (!pre[i].is_number()) throw ValidationError("\"pre_trends\" entries must be numbers");
    g.pre_trends(static_cast<Index>(i)) = pre[i].get<double>();
  }
  if (!j.at("theta1").is_number()) throw ValidationError("\"theta1\" must be a number");
  g.theta1 = j.at("theta1").get<double>();
  validate(g);
  return g;
}

ReducedForm read_reduced_form(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  return reduced_form_from_json(j);
}

namespace {
json to_json(const Attainment& a) {
  json point = json::array();
  for (Index i = 0; i < a.point.size(); ++i) point.push_back(a.point(i));
  return json{{"r", a.r}, {"m", a.m}, {"point", point}};
}
}  // namespace

json to_json(const Interval& iv) {
  return json{{"lb", json_number(iv.lb)},
              {"ub", json_number(iv.ub)},
              {"lb_argmin", to_json(iv.lb_argmin)},
              {"ub_argmax", to_json(iv.ub_argmax)}};
}

json to_json(const FrontierGrid& grid) {
  json points = json::array();
  for (std::size_t j = 0; j < grid.axis.size(); ++j) {
    json p{{"param_lo", grid.axis[j].lo},
           {"param_hi", grid.axis[j].hi},
           {"m_bp", json_number(grid.values[j])},
           {"flag", to_string(grid.flags[j])}};
    if (!grid.errors[j].empty()) p["error"] = grid.errors[j];
    points.push_back(p);
  }
  return json{{"points", points}};
}

json to_json(const LowerBand& band) {
  json points = json::array();
  for (Index j = 0; j < band.band.size(); ++j) {
    json p{{"center", json_number(band.center(j))},
           {"mean", json_number(band.mean(j))},
           {"scale", json_number(band.scale(j))},
           {"band", json_number(band.band(j))},
           {"flag", to_string(band.flags[static_cast<std::size_t>(j)])}};
    if (!band.grid.empty()) {
      p["param_lo"] = band.grid[static_cast<std::size_t>(j)].lo;
      p["param_hi"] = band.grid[static_cast<std::size_t>(j)].hi;
    }
    points.push_back(p);
  }
  return json{{"alpha", band.alpha},
              {"critical", json_number(band.critical)},
              {"hard_violations", band.hard_violations},
              {"points", points}};
}

json to_json(const CredibleSet& cs) {
  return json{{"alpha", cs.alpha},       {"center_lb", cs.center_lb}, {"center_ub", cs.center_ub},
              {"enlargement", cs.enlargement}, {"lb", cs.lb},       {"ub", cs.ub}};
}

void write_draws_csv(std::ostream& out, const PosteriorDraws& draws) {
  const Index S = draws.num_pre();
  for (Index i = 0; i < S; ++i) out << "delta_" << pre_period(i, S) << ',';
  out << "theta1\n";
  for (Index b = 0; b < draws.num_draws(); ++b) {
    for (Index j = 0; j <= S; ++j) out << (j ? "," : "") << format_double(draws.draws(b, j));
    out << '\n';
  }
}

namespace {

constexpr char kMagic[8] = {'D', 'I', 'D', 'S', 'D', 'R', 'W', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(const std::string& data, std::size_t& pos) {
  if (pos + 8 > data.size()) throw ValidationError("truncated binary draws file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

std::uint64_t double_bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

double bits_double(std::uint64_t u) {
  double d;
  std::memcpy(&d, &u, sizeof d);
  return d;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Reads a numeric CSV body; returns header cells and the value matrix.
Matrix read_numeric_csv(const std::string& text, const std::string& path, std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      continue;
    }
    if (cells.size() != header.size())
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        row.push_back(parse_double(c));
      } catch (const ValidationError& e) {
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ValidationError(path + ": missing header");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < header.size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

}  // namespace

void write_draws_binary(std::ostream& out, const PosteriorDraws& draws) {
  out.write(kMagic, 8);
  put_u64(out, static_cast<std::uint64_t>(draws.num_draws()));
  put_u64(out, static_cast<std::uint64_t>(draws.draws.cols()));
  put_u64(out, draws.seed);
  put_u64(out, static_cast<std::uint64_t>(draws.rejections));
  put_u64(out, draws.method == "bayesian" ? 0 : draws.method == "frequentist" ? 1 : 2);
  for (Index j = 0; j < draws.draws.cols(); ++j)
    for (Index b = 0; b < draws.num_draws(); ++b) put_u64(out, double_bits(draws.draws(b, j)));
}

PosteriorDraws read_draws(const std::string& path) {
  const std::string data = read_file(path);
  PosteriorDraws d;
  if (data.size() >= 8 && std::memcmp(data.data(), kMagic, 8) == 0) {
    std::size_t pos = 8;
    const auto rows = get_u64(data, pos);
    const auto cols = get_u64(data, pos);
    d.seed = get_u64(data, pos);
    d.rejections = static_cast<Index>(get_u64(data, pos));
    const auto method = get_u64(data, pos);
    d.method = method == 0 ? "bayesian" : method == 1 ? "frequentist" : "other";
    if (cols < 2) throw ValidationError(path + ": draws need at least two columns");
    if (data.size() != pos + 8 * rows * cols) throw ValidationError(path + ": binary draws size mismatch");
    d.draws.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index j = 0; j < d.draws.cols(); ++j)
      for (Index b = 0; b < d.draws.rows(); ++b) d.draws(b, j) = bits_double(get_u64(data, pos));
  } else {
    std::vector<std::string> header;
    d.draws = read_numeric_csv(data, path, header);
    if (header.size() < 2 || header.back() != "theta1")
      throw ValidationError(path + ": draws CSV needs pre-trend columns followed by theta1");
  }
  if (d.draws.rows() < 1) throw ValidationError(path + ": no draws");
  if (!d.draws.allFinite()) throw ValidationError(path + ": draws must be finite");
  return d;
}

void write_frontier_csv(std::ostream& out, const FrontierGrid& grid) {
  out << "param_lo,param_hi,m_bp,unbounded_flag\n";
  for (std::size_t j = 0; j < grid.axis.size(); ++j) {
    out << format_double(grid.axis[j].lo) << ',' << format_double(grid.axis[j].hi) << ','
        << format_double(grid.values[j]) << ',' << (grid.flags[j] == PointFlag::unbounded ? 1 : 0)
        << '\n';
  }
}

void write_frontier_draws_csv(std::ostream& out, const std::vector<SensitivityPoint>& axis,
                              const Matrix& values) {
  for (std::size_t j = 0; j < axis.size(); ++j)
    out << (j ? "," : "") << format_double(axis[j].lo) << ':' << format_double(axis[j].hi);
  out << '\n';
  for (Index b = 0; b < values.rows(); ++b) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(b, j));
    out << '\n';
  }
}

Matrix read_frontier_draws_csv(const std::string& path, std::vector<SensitivityPoint>& axis) {
  std::vector<std::string> header;
  Matrix m = read_numeric_csv(read_file(path), path, header);
  axis.clear();
  for (const auto& h : header) {
    const auto pos = h.find(':');
    if (pos == std::string::npos) throw ValidationError(path + ": header cell '" + h + "' is not lo:hi");
    axis.push_back({parse_double(h.substr(0, pos)), parse_double(h.substr(pos + 1))});
  }
  return m;
}

void write_band_csv(std::ostream& out, const LowerBand& band) {
  out << "param_lo,param_hi,center,band,flag\n";
  for (Index j = 0; j < band.band.size(); ++j) {
    const bool has_grid = !band.grid.empty();
    const auto k = static_cast<std::size_t>(j);
    out << (has_grid ? format_double(band.grid[k].lo) : "") << ','
        << (has_grid ? format_double(band.grid[k].hi) : "") << ',' << format_double(band.center(j))
        << ',' << format_double(band.band(j)) << ',' << to_string(band.flags[k]) << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return ss.str();
}

}  // namespace didsens
