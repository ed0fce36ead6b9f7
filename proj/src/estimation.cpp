#include "didsens/estimation.hpp"

#include "didsens/parallel.hpp"
#include "didsens/quantile.hpp"
#include "didsens/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace didsens {

namespace {

constexpr std::uint32_t kPurposeResample = 1;

std::string at_line(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw ValidationError(at_line(lineno, "unterminated quoted field"));
  out.push_back(field);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& s, std::size_t lineno, const char* what) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last)
    throw ValidationError(at_line(lineno, std::string("cannot parse ") + what + " '" + s + "'"));
  return v;
}

}  // namespace

PanelDataset PanelDataset::from_rows(const std::vector<PanelRow>& rows,
                                     const std::vector<std::size_t>& source_lines) {
  if (rows.empty()) throw ValidationError("panel has no rows");

  struct UnitInfo {
    std::string cluster;
    int treated;
    std::map<long long, double> y;
  };
  std::map<std::string, UnitInfo> units;
  std::map<long long, int> period_set;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const PanelRow& r = rows[i];
    const std::string where = source_lines.size() == rows.size()
                                  ? at_line(source_lines[i], "")
                                  : "row " + std::to_string(i + 1) + ": ";
    if (r.treated != 0 && r.treated != 1)
      throw ValidationError(where + "treated must be 0 or 1");
    if (!std::isfinite(r.y)) throw ValidationError(where + "outcome must be finite");
    auto [it, fresh] = units.try_emplace(r.unit_id, UnitInfo{r.cluster_id, r.treated, {}});
    UnitInfo& u = it->second;
    if (!fresh) {
      if (u.treated != r.treated)
        throw ValidationError(where + "treated indicator varies within unit '" + r.unit_id + "'");
      if (u.cluster != r.cluster_id)
        throw ValidationError(where + "cluster varies within unit '" + r.unit_id + "'");
    }
    if (!u.y.emplace(r.time, r.y).second)
      throw ValidationError(where + "duplicate (unit_id, time) for unit '" + r.unit_id + "'");
    period_set.emplace(r.time, 0);
  }

  PanelDataset d;
  for (const auto& [t, unused] : period_set) d.periods_.push_back(t);
  for (std::size_t i = 1; i < d.periods_.size(); ++i) {
    if (d.periods_[i] != d.periods_[i - 1] + 1)
      throw ValidationError("periods must be consecutive integers; gap after " +
                            std::to_string(d.periods_[i - 1]));
  }
  if (d.periods_.size() < 3)
    throw ValidationError("panel needs at least three periods (one pre-trend and the post period)");

  std::map<std::string, int> cluster_rank;
  for (const auto& [id, u] : units) cluster_rank.emplace(u.cluster, 0);
  int rank = 0;
  for (auto& [id, r] : cluster_rank) {
    r = rank++;
    d.cluster_ids_.push_back(id);
  }

  const Index n = static_cast<Index>(units.size());
  const Index T = static_cast<Index>(d.periods_.size());
  d.unit_cluster_.resize(n);
  d.treated_.resize(n);
  d.changes_.resize(n, T - 1);
  Index i = 0;
  bool any_treated = false, any_control = false;
  for (const auto& [id, u] : units) {
    if (static_cast<Index>(u.y.size()) != T)
      throw ValidationError("unbalanced panel: unit '" + id + "' is observed in " +
                            std::to_string(u.y.size()) + " of " + std::to_string(T) + " periods");
    d.unit_ids_.push_back(id);
    d.unit_cluster_(i) = cluster_rank.at(u.cluster);
    d.treated_(i) = u.treated;
    any_treated = any_treated || u.treated == 1;
    any_control = any_control || u.treated == 0;
    Index t = 0;
    double prev = 0.0;
    for (const auto& [time, y] : u.y) {
      if (t > 0) d.changes_(i, t - 1) = y - prev;
      prev = y;
      ++t;
    }
    ++i;
  }
  if (!any_treated || !any_control)
    throw ValidationError("panel needs both treated and untreated units");
  return d;
}

PanelDataset parse_panel_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::array<int, 5> col{-1, -1, -1, -1, -1};
  static const std::array<const char*, 5> names{"unit_id", "cluster_id", "time", "y", "treated"};
  std::size_t ncols = 0;
  std::vector<PanelRow> rows;
  std::vector<std::size_t> lines;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (trim(line).empty()) continue;
      auto fields = split_csv_line(line, lineno);
      for (auto& f : fields) f = trim(f);
      if (ncols == 0) {
        ncols = fields.size();
        for (std::size_t c = 0; c < fields.size(); ++c) {
          const auto it = std::find(names.begin(), names.end(), fields[c]);
          if (it == names.end())
            throw ValidationError(at_line(lineno, "unexpected column '" + fields[c] + "'"));
          int& slot = col[static_cast<std::size_t>(it - names.begin())];
          if (slot >= 0) throw ValidationError(at_line(lineno, "duplicate column '" + fields[c] + "'"));
          slot = static_cast<int>(c);
        }
        for (std::size_t k = 0; k < names.size(); ++k) {
          if (col[k] < 0)
            throw ValidationError(at_line(lineno, std::string("missing column '") + names[k] + "'"));
        }
        continue;
      }
      if (fields.size() != ncols)
        throw ValidationError(at_line(lineno, "expected " + std::to_string(ncols) + " fields, got " +
                                                  std::to_string(fields.size())));
      PanelRow r;
      r.unit_id = fields[static_cast<std::size_t>(col[0])];
      r.cluster_id = fields[static_cast<std::size_t>(col[1])];
      if (r.unit_id.empty()) throw ValidationError(at_line(lineno, "empty unit_id"));
      if (r.cluster_id.empty()) throw ValidationError(at_line(lineno, "empty cluster_id"));
      r.time = parse_number<long long>(fields[static_cast<std::size_t>(col[2])], lineno, "time");
      r.y = parse_number<double>(fields[static_cast<std::size_t>(col[3])], lineno, "y");
      r.treated = parse_number<int>(fields[static_cast<std::size_t>(col[4])], lineno, "treated");
      if (r.treated != 0 && r.treated != 1)
        throw ValidationError(at_line(lineno, "treated must be 0 or 1"));
      if (!std::isfinite(r.y)) throw ValidationError(at_line(lineno, "y must be finite"));
      rows.push_back(std::move(r));
      lines.push_back(lineno);
    }
    if (ncols == 0) throw ValidationError("missing header");
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  if (in.bad()) throw IoError(source + ": read failure");
  try {
    return PanelDataset::from_rows(rows, lines);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

PanelDataset read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open panel file '" + path + "'");
  return parse_panel_csv(in, path);
}

void write_panel_csv(std::ostream& out, const std::vector<PanelRow>& rows) {
  out << "unit_id,cluster_id,time,y,treated\n";
  char buf[64];
  for (const PanelRow& r : rows) {
    const auto res = std::to_chars(buf, buf + sizeof buf, r.y);
    out << r.unit_id << ',' << r.cluster_id << ',' << r.time << ','
        << std::string(buf, res.ptr) << ',' << r.treated << '\n';
  }
}

std::optional<ReducedForm> try_reduced_form(const PanelDataset& data, const Vector& cluster_weights) {
  if (cluster_weights.size() != data.num_clusters())
    throw ValidationError("expected one weight per cluster");
  if (!cluster_weights.allFinite() || (cluster_weights.array() < 0.0).any())
    throw ValidationError("cluster weights must be finite and nonnegative");
  const Index n = data.num_units();
  Vector w(n);
  for (Index i = 0; i < n; ++i) w(i) = cluster_weights(data.unit_cluster()(i));
  const Vector wx = w.cwiseProduct(data.treated());
  const Vector w0 = w - wx;
  const double sx = wx.sum();
  const double s0 = w0.sum();
  if (!(sx > 0.0) || !(s0 > 0.0)) return std::nullopt;
  // E_w[dY X]/E_w[X] - E_w[dY (1-X)]/(1 - E_w[X]); the total weight cancels.
  const Vector diff = (data.outcome_changes().transpose() * wx) / sx -
                      (data.outcome_changes().transpose() * w0) / s0;
  ReducedForm g;
  const Index S = data.num_pre();
  g.pre_trends = diff.head(S);
  g.theta1 = diff(S);
  return g;
}

ReducedForm compute_reduced_form(const PanelDataset& data, const Vector& cluster_weights) {
  auto g = try_reduced_form(data, cluster_weights);
  if (!g) throw ValidationError("degenerate treatment share under the supplied weights");
  return *g;
}

ReducedForm compute_reduced_form(const PanelDataset& data) {
  const Index nc = data.num_clusters();
  return compute_reduced_form(data, Vector::Constant(nc, 1.0 / static_cast<double>(nc)));
}

ReducedForm PosteriorDraws::row(Index b) const {
  ReducedForm g;
  g.pre_trends = draws.row(b).head(num_pre()).transpose();
  g.theta1 = draws(b, num_pre());
  return g;
}

namespace {

using WeightFn = std::function<Vector(Index draw, std::uint32_t attempt)>;

PosteriorDraws run_bootstrap(const PanelDataset& data, Index B, const WeightFn& weights) {
  if (B < 1) throw ValidationError("number of draws must be at least 1");
  const Index S = data.num_pre();
  const Index cap = 100 * B;
  PosteriorDraws out;
  out.draws.resize(B, S + 1);
  std::vector<Index> rejected(static_cast<std::size_t>(B), 0);
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t bi) {
    const Index b = static_cast<Index>(bi);
    for (std::uint32_t attempt = 0;; ++attempt) {
      if (static_cast<Index>(attempt) > cap)
        throw ValidationError("bootstrap rejection cap (100 B) reached");
      const auto g = try_reduced_form(data, weights(b, attempt));
      if (g) {
        out.draws.row(b).head(S) = g->pre_trends.transpose();
        out.draws(b, S) = g->theta1;
        break;
      }
      ++rejected[bi];
    }
  });
  for (Index r : rejected) out.rejections += r;
  if (out.rejections > cap) throw ValidationError("bootstrap rejection cap (100 B) reached");
  return out;
}

}  // namespace

Vector bayesian_weights(Index num_clusters, std::uint64_t seed, Index draw, std::uint32_t attempt) {
  Vector v(num_clusters);
  for (Index c = 0; c < num_clusters; ++c) {
    v(c) = standard_exponential(seed, static_cast<std::uint64_t>(draw),
                                static_cast<std::uint64_t>(c), attempt);
  }
  return v / v.sum();
}

PosteriorDraws bayesian_bootstrap(const PanelDataset& data, Index B, std::uint64_t seed) {
  const Index nc = data.num_clusters();
  PosteriorDraws out = run_bootstrap(data, B, [&](Index b, std::uint32_t attempt) {
    return bayesian_weights(nc, seed, b, attempt);
  });
  out.seed = seed;
  out.method = "bayesian";
  return out;
}

PosteriorDraws bayesian_bootstrap_with_variates(const PanelDataset& data, Index B,
                                                const VariateSource& variate) {
  const Index nc = data.num_clusters();
  PosteriorDraws out = run_bootstrap(data, B, [&](Index b, std::uint32_t attempt) {
    Vector v(nc);
    for (Index c = 0; c < nc; ++c) v(c) = variate(b, c, attempt);
    return Vector(v / v.sum());
  });
  out.method = "bayesian";
  return out;
}

Vector cluster_resample_weights(Index num_clusters, std::uint64_t seed, Index draw,
                                std::uint32_t attempt) {
  Vector counts = Vector::Zero(num_clusters);
  const auto key = Philox4x32::key_from_seed(seed);
  for (Index slot = 0; slot < num_clusters; ++slot) {
    const auto out = Philox4x32::apply(
        stream_counter(static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(slot), attempt,
                       kPurposeResample),
        key);
    counts(static_cast<Index>(bounded_index(out[0], out[1], static_cast<std::uint64_t>(num_clusters)))) += 1.0;
  }
  return counts / static_cast<double>(num_clusters);
}

PosteriorDraws frequentist_cluster_bootstrap(const PanelDataset& data, Index B, std::uint64_t seed) {
  const Index nc = data.num_clusters();
  if (nc < 2) throw ValidationError("cluster bootstrap needs at least two clusters");
  PosteriorDraws out = run_bootstrap(data, B, [&](Index b, std::uint32_t attempt) {
    return cluster_resample_weights(nc, seed, b, attempt);
  });
  out.seed = seed;
  out.method = "frequentist";
  return out;
}

std::vector<CoordinateSummary> posterior_summary(const Matrix& draws, double alpha) {
  if (draws.rows() == 0 || draws.cols() == 0) throw ValidationError("posterior summary of empty draws");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  std::vector<CoordinateSummary> out;
  for (Index j = 0; j < draws.cols(); ++j) {
    std::vector<double> col(draws.col(j).data(), draws.col(j).data() + draws.rows());
    std::sort(col.begin(), col.end());
    out.push_back({quantile_linear_sorted(col, 0.5), quantile_linear_sorted(col, alpha / 2.0),
                   quantile_linear_sorted(col, 1.0 - alpha / 2.0)});
  }
  return out;
}

std::vector<CoordinateSummary> posterior_summary(const PosteriorDraws& draws, double alpha) {
  return posterior_summary(draws.draws, alpha);
}

std::vector<PanelRow> simulate_panel_rows(const SyntheticPanelSpec& spec, std::uint64_t seed) {
  validate(spec.gamma);
  if (spec.num_clusters < 2 || spec.units_per_cluster < 1)
    throw ValidationError("synthetic panel needs at least two clusters");
  const Index S = spec.gamma.num_pre();
  const Index T = S + 2;  // periods 1..T; the last one is post
  // Treated-group offset path g_t whose consecutive changes are the pre-trends, then theta_1.
  Vector offset = Vector::Zero(T);
  for (Index t = 1; t < T; ++t) {
    offset(t) = offset(t - 1) + (t <= S ? spec.gamma.pre_trends(t - 1) : spec.gamma.theta1);
  }
  CounterStream rng(seed, 7);
  std::vector<PanelRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.num_clusters * spec.units_per_cluster * T));
  for (Index c = 0; c < spec.num_clusters; ++c) {
    Vector shock(T);
    for (Index t = 0; t < T; ++t) shock(t) = spec.cluster_sd * rng.normal();
    for (Index u = 0; u < spec.units_per_cluster; ++u) {
      const int treated = rng.uniform() < spec.treated_share ? 1 : 0;
      const double level = rng.normal();
      const std::string unit = "u" + std::to_string(c * spec.units_per_cluster + u);
      for (Index t = 0; t < T; ++t) {
        PanelRow r;
        r.unit_id = unit;
        r.cluster_id = "c" + std::to_string(c);
        r.time = t + 1;
        r.y = level + 0.1 * static_cast<double>(t) + shock(t) + treated * offset(t) +
              spec.noise_sd * rng.normal();
        r.treated = treated;
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

}  // namespace didsens
