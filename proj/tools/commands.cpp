#include "commands.hpp"

#include "svg.hpp"

#include "didsens/breakdown.hpp"
#include "didsens/core_bounds.hpp"
#include "didsens/estimation.hpp"
#include "didsens/inference.hpp"
#include "didsens/io.hpp"
#include "didsens/oracle.hpp"
#include "didsens/parallel.hpp"
#include "didsens/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace didsens::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::filesystem::path prepare_out_dir(const json& cfg) {
  const std::filesystem::path dir = get_text(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void emit(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  write_file_atomic((dir / name).string(), content);
}

void emit_config(const std::filesystem::path& dir, const std::string& command, const json& cfg) {
  emit(dir, "config.json", json{{"command", command}, {"options", cfg}}.dump(2) + "\n");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Vector broadcast(const std::vector<double>& v, Index n, const std::string& key) {
  if (v.size() == 1) return Vector::Constant(n, v[0]);
  if (static_cast<Index>(v.size()) != n)
    throw ValidationError("option --" + key + " needs 1 or " + std::to_string(n) + " values");
  return Eigen::Map<const Vector>(v.data(), n);
}

AnticipationBounds bounds_from_config(const json& cfg, Parameterization param, Index S) {
  const std::vector<double> lo = get_numbers(cfg, "lo");
  const std::vector<double> hi = get_numbers(cfg, "hi");
  switch (param) {
    case Parameterization::increments: {
      AnticipationIncrementBounds a{broadcast(lo, S, "lo"), broadcast(hi, S, "hi")};
      validate(a, S);
      return a;
    }
    case Parameterization::pretrend_shares: {
      if (lo.size() != 1 || hi.size() != 1)
        throw ValidationError("pre-trend share bounds take one --lo and one --hi value");
      PretrendShareBounds p{lo[0], hi[0]};
      validate(p);
      return p;
    }
    case Parameterization::treatment_shares: {
      TreatmentShareBounds k{broadcast(lo, S + 1, "lo"), broadcast(hi, S + 1, "hi")};
      validate(k, S);
      return k;
    }
  }
  throw ValidationError("unknown parameterization");
}

Conclusion conclusion_from_config(const json& cfg) {
  const std::string kind = get_text(cfg, "conclusion");
  if (kind == "negative") {
    if (has(cfg, "tau") && get_number(cfg, "tau") != 0.0)
      throw ValidationError("conclusion 'negative' is ATT < 0; --tau applies to 'above' only");
    return Conclusion::negative();
  }
  if (kind == "above") return Conclusion::above(get_number(cfg, "tau"));
  throw ValidationError("unknown conclusion '" + kind + "' (expected negative or above)");
}

struct AxisSpec {
  std::string vary;
  std::vector<SensitivityPoint> points;
};

AxisSpec axis_from_config(const json& cfg) {
  AxisSpec a;
  a.vary = get_text(cfg, "vary");
  const double from = get_number(cfg, "from");
  const double to = get_number(cfg, "to");
  const Index n = static_cast<Index>(get_integer(cfg, "points"));
  if (n < 1 || n > 100000) throw ValidationError("--points must lie in [1, 100000]");
  if (a.vary == "lower") a.points = axis_vary_lower(from, to, n, get_number(cfg, "fixed"));
  else if (a.vary == "upper") a.points = axis_vary_upper(get_number(cfg, "fixed"), from, to, n);
  else if (a.vary == "diagonal") a.points = axis_diagonal(from, to, n);
  else throw ValidationError("unknown --vary '" + a.vary + "' (expected lower, upper or diagonal)");
  for (const auto& p : a.points) {
    if (p.lo > p.hi) throw ValidationError("axis point with lower bound above upper bound");
  }
  return a;
}

std::vector<double> axis_x(const AxisSpec& a) {
  std::vector<double> x;
  for (const auto& p : a.points) x.push_back(a.vary == "upper" ? p.hi : p.lo);
  return x;
}

double column_median(const Matrix& m, Index j) {
  std::vector<double> v(m.col(j).data(), m.col(j).data() + m.rows());
  return quantile_linear(v, 0.5);
}

// CSV with "lb" and "ub" columns; other columns are ignored.
std::pair<Vector, Vector> read_interval_draws(const std::string& path) {
  std::istringstream in(read_file(path));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
      if (!c.empty() && c.back() == '\r') c.pop_back();
      cells.push_back(c);
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  const auto header = split(line);
  const auto lb_it = std::find(header.begin(), header.end(), "lb");
  const auto ub_it = std::find(header.begin(), header.end(), "ub");
  if (lb_it == header.end() || ub_it == header.end()) throw IoError(path + ": header needs lb and ub columns");
  const auto li = static_cast<std::size_t>(lb_it - header.begin());
  const auto ui = static_cast<std::size_t>(ub_it - header.begin());
  std::vector<double> lo, hi;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw IoError(path + ": line " + std::to_string(n) + ": wrong number of fields");
    try {
      lo.push_back(parse_double(cells[li]));
      hi.push_back(parse_double(cells[ui]));
    } catch (const std::exception&) {
      throw IoError(path + ": line " + std::to_string(n) + ": not a number");
    }
  }
  if (lo.empty()) throw IoError(path + ": no draws");
  return {Eigen::Map<Vector>(lo.data(), static_cast<Index>(lo.size())),
          Eigen::Map<Vector>(hi.data(), static_cast<Index>(hi.size()))};
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const json& cfg) {
  const std::string panel = get_text(cfg, "panel");
  const Index B = static_cast<Index>(get_integer(cfg, "draws"));
  const long long seed_raw = get_integer(cfg, "seed");
  if (seed_raw < 0) throw ValidationError("--seed must be nonnegative");
  const auto seed = static_cast<std::uint64_t>(seed_raw);
  const double alpha = get_number(cfg, "alpha");
  const std::string format = get_text(cfg, "format");
  if (format != "csv" && format != "bin") throw ValidationError("--format must be csv or bin");
  if (B < 1) throw ValidationError("--draws must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("--alpha must lie in (0, 1)");

  const PanelDataset data = read_panel_csv(panel);
  const std::filesystem::path dir = prepare_out_dir(cfg);
  const ReducedForm point = compute_reduced_form(data);
  const PosteriorDraws draws = bayesian_bootstrap(data, B, seed);
  const auto summary = posterior_summary(draws, alpha);
  const Index S = data.num_pre();

  std::vector<std::string> names;
  for (Index i = 0; i < S; ++i) names.push_back("delta_" + std::to_string(pre_period(i, S)));
  names.push_back("theta1");

  const bool freq = cfg.at("frequentist").get<bool>();
  PosteriorDraws fdraws;
  std::vector<CoordinateSummary> fsummary;
  if (freq) {
    fdraws = frequentist_cluster_bootstrap(data, B, seed);
    fsummary = posterior_summary(fdraws, alpha);
  }

  json coords = json::array();
  std::ostringstream csv;
  csv << "coordinate,estimate,median,lo,hi" << (freq ? ",freq_lo,freq_hi" : "") << "\n";
  ReducedForm median;
  median.pre_trends.resize(S);
  for (Index j = 0; j <= S; ++j) {
    const auto& s = summary[static_cast<std::size_t>(j)];
    const double est = j < S ? point.pre_trends(j) : point.theta1;
    json c{{"name", names[static_cast<std::size_t>(j)]}, {"estimate", est}, {"median", s.median}, {"lo", s.lo}, {"hi", s.hi}};
    csv << names[static_cast<std::size_t>(j)] << ',' << format_double(est) << ',' << format_double(s.median) << ','
        << format_double(s.lo) << ',' << format_double(s.hi);
    if (freq) {
      const auto& f = fsummary[static_cast<std::size_t>(j)];
      c["freq_lo"] = f.lo;
      c["freq_hi"] = f.hi;
      csv << ',' << format_double(f.lo) << ',' << format_double(f.hi);
    }
    csv << '\n';
    coords.push_back(c);
    if (j < S) median.pre_trends(j) = s.median; else median.theta1 = s.median;
  }
  json periods = json::array();
  for (long long t : data.periods()) periods.push_back(t);
  json report{{"num_units", data.num_units()},
              {"num_clusters", data.num_clusters()},
              {"num_pre_trends", S},
              {"periods", periods},
              {"post_period", data.periods().back()},
              {"draws", B},
              {"seed", seed},
              {"alpha", alpha},
              {"quantiles", "linear interpolation between order statistics"},
              {"rejections", draws.rejections},
              {"point_estimate", to_json(point)},
              {"coordinates", coords}};
  if (freq) report["frequentist_rejections"] = fdraws.rejections;

  auto draws_text = [&](const PosteriorDraws& d) {
    std::ostringstream o;
    if (format == "csv") write_draws_csv(o, d); else write_draws_binary(o, d);
    return o.str();
  };
  emit(dir, std::string("draws.") + format, draws_text(draws));
  if (freq) emit(dir, std::string("frequentist_draws.") + format, draws_text(fdraws));
  emit(dir, "summary.json", dump(report));
  emit(dir, "summary.csv", csv.str());
  emit(dir, "gamma_median.json", dump(to_json(median)));
  emit_config(dir, "estimate", cfg);

  std::cout << csv.str();
  return 0;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const json& cfg) {
  const ReducedForm gamma = read_reduced_form(get_text(cfg, "gamma"));
  const Parameterization param = parameterization_from_string(get_text(cfg, "param"));
  const double M = get_number(cfg, "M");
  validate_magnitude(M);
  const AnticipationBounds bounds = bounds_from_config(cfg, param, gamma.num_pre());
  const Interval iv = closed_form_interval(gamma, bounds, M);
  const std::filesystem::path dir = prepare_out_dir(cfg);
  json report{{"parameterization", to_string(param)},
              {"M", M},
              {"gamma", to_json(gamma)},
              {"interval", to_json(iv)},
              {"singleton", iv.lb == iv.ub}};
  emit(dir, "interval.json", dump(report));
  emit_config(dir, "bounds", cfg);
  std::cout << "[" << format_double(iv.lb) << ", " << format_double(iv.ub) << "]\n";
  return 0;
}

// ---------------------------------------------------------------- frontier

int cmd_frontier(const json& cfg) {
  const Parameterization param = parameterization_from_string(get_text(cfg, "param"));
  const Conclusion conc = conclusion_from_config(cfg);
  const AxisSpec axis = axis_from_config(cfg);
  const bool from_gamma = has(cfg, "gamma"), from_draws = has(cfg, "draws");
  if (from_gamma == from_draws) throw ValidationError("pass exactly one of --gamma or --draws");
  const double cap = get_number(cfg, "m_cap");

  FrontierGrid result;
  Matrix draw_values;
  if (from_gamma) {
    result = frontier_grid(read_reduced_form(get_text(cfg, "gamma")), axis.points, conc, param);
  } else {
    const PosteriorDraws draws = read_draws(get_text(cfg, "draws"));
    const Index B = draws.num_draws();
    const Index J = static_cast<Index>(axis.points.size());
    draw_values.resize(B, J);
    std::vector<std::string> errors(static_cast<std::size_t>(J));
    for (Index b = 0; b < B; ++b) {
      const FrontierGrid g = frontier_grid(draws.row(b), axis.points, conc, param);
      for (Index j = 0; j < J; ++j) {
        draw_values(b, j) = g.values[static_cast<std::size_t>(j)];
        if (!g.errors[static_cast<std::size_t>(j)].empty()) errors[static_cast<std::size_t>(j)] = g.errors[static_cast<std::size_t>(j)];
      }
    }
    result.axis = axis.points;
    for (Index j = 0; j < J; ++j) {
      const auto k = static_cast<std::size_t>(j);
      if (!errors[k].empty()) {
        result.values.push_back(std::numeric_limits<double>::quiet_NaN());
        result.flags.push_back(PointFlag::invalid);
      } else {
        const double med = column_median(draw_values, j);
        result.values.push_back(med);
        result.flags.push_back(std::isinf(med) ? PointFlag::unbounded : PointFlag::finite);
      }
      result.errors.push_back(errors[k]);
    }
  }

  const std::filesystem::path dir = prepare_out_dir(cfg);
  std::ostringstream csv;
  write_frontier_csv(csv, result);
  emit(dir, "frontier.csv", csv.str());
  json report = to_json(result);
  report["parameterization"] = to_string(param);
  report["conclusion"] = conc.kind == Conclusion::Kind::att_negative ? "ATT < 0" : "ATT > tau";
  report["tau"] = conc.threshold();
  report["source"] = from_gamma ? "plug-in" : "posterior median of frontier draws";
  emit(dir, "frontier.json", dump(report));
  if (from_draws) {
    std::ostringstream d;
    write_frontier_draws_csv(d, axis.points, draw_values);
    emit(dir, "frontier_draws.csv", d.str());
  }
  if (cfg.at("svg").get<bool>()) {
    const std::string x_label = std::string(to_string(param)) + (axis.vary == "upper" ? " upper bound" : " lower bound");
    emit(dir, "frontier.svg",
         line_chart(axis_x(axis), {{"breakdown value", "#1f5fa8", result.values}}, "Breakdown frontier",
                    x_label, "M", cap));
  }
  emit_config(dir, "frontier", cfg);
  std::cout << csv.str();
  return 0;
}

// ---------------------------------------------------------------- band

int cmd_band(const json& cfg) {
  std::vector<SensitivityPoint> axis;
  const Matrix draws = read_frontier_draws_csv(get_text(cfg, "frontier_draws"), axis);
  const double alpha = get_number(cfg, "alpha");
  const LowerBand band = simultaneous_lower_band(draws, alpha, axis);
  const std::filesystem::path dir = prepare_out_dir(cfg);
  std::ostringstream csv;
  write_band_csv(csv, band);
  emit(dir, "band.csv", csv.str());
  json report = to_json(band);
  report["coverage_on_draws"] = band_coverage(band, draws);
  emit(dir, "band.json", dump(report));
  if (cfg.at("svg").get<bool>()) {
    std::vector<double> x, c, l;
    const bool vary_hi = axis.size() > 1 && axis.front().lo == axis.back().lo;
    for (std::size_t j = 0; j < axis.size(); ++j) {
      x.push_back(vary_hi ? axis[j].hi : axis[j].lo);
      c.push_back(band.center(static_cast<Index>(j)));
      l.push_back(band.band(static_cast<Index>(j)));
    }
    emit(dir, "band.svg",
         line_chart(x, {{"posterior median", "#1f5fa8", c}, {"lower band", "#c0392b", l}},
                    "Simultaneous lower credible band", vary_hi ? "upper bound" : "lower bound", "M",
                    get_number(cfg, "m_cap")));
  }
  emit_config(dir, "band", cfg);
  std::cout << "critical value " << format_double(band.critical) << "\n" << csv.str();
  return 0;
}

// ---------------------------------------------------------------- credset

int cmd_credset(const json& cfg) {
  const double alpha = get_number(cfg, "alpha");
  const bool from_draws = has(cfg, "draws"), from_intervals = has(cfg, "interval_draws");
  if (from_draws == from_intervals) throw ValidationError("pass exactly one of --draws or --interval_draws");

  std::vector<double> ms;
  std::vector<Vector> lows, highs;
  if (from_intervals) {
    const auto [lb, ub] = read_interval_draws(get_text(cfg, "interval_draws"));
    ms.push_back(std::numeric_limits<double>::quiet_NaN());
    lows.push_back(lb);
    highs.push_back(ub);
  } else {
    const PosteriorDraws draws = read_draws(get_text(cfg, "draws"));
    const Parameterization param = parameterization_from_string(get_text(cfg, "param"));
    const AnticipationBounds bounds = bounds_from_config(cfg, param, draws.num_pre());
    ms = get_numbers(cfg, "M");
    for (double M : ms) {
      validate_magnitude(M);
      Vector lo(draws.num_draws()), hi(draws.num_draws());
      parallel_for(static_cast<std::size_t>(draws.num_draws()), [&](std::size_t b) {
        const Interval iv = closed_form_interval(draws.row(static_cast<Index>(b)), bounds, M);
        lo(static_cast<Index>(b)) = iv.lb;
        hi(static_cast<Index>(b)) = iv.ub;
      });
      lows.push_back(lo);
      highs.push_back(hi);
    }
  }

  const std::filesystem::path dir = prepare_out_dir(cfg);
  std::ostringstream csv;
  csv << "M,center_lb,center_ub,enlargement,lb,ub,containment\n";
  json sets = json::array();
  std::ostringstream idraws;
  idraws << "M,draw,lb,ub\n";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const CredibleSet cs = pointwise_credible_set(lows[i], highs[i], alpha);
    const double cover = credible_set_containment(cs, lows[i], highs[i]);
    const std::string mtxt = std::isnan(ms[i]) ? "" : format_double(ms[i]);
    csv << mtxt << ',' << format_double(cs.center_lb) << ',' << format_double(cs.center_ub) << ','
        << format_double(cs.enlargement) << ',' << format_double(cs.lb) << ',' << format_double(cs.ub) << ','
        << format_double(cover) << '\n';
    json j = to_json(cs);
    j["containment"] = cover;
    if (!std::isnan(ms[i])) j["M"] = ms[i];
    sets.push_back(j);
    for (Index b = 0; b < lows[i].size(); ++b)
      idraws << mtxt << ',' << b << ',' << format_double(lows[i](b)) << ',' << format_double(highs[i](b)) << '\n';
  }
  emit(dir, "credset.csv", csv.str());
  emit(dir, "credset.json", dump(json{{"alpha", alpha}, {"sets", sets}}));
  if (from_draws) emit(dir, "interval_draws.csv", idraws.str());
  emit_config(dir, "credset", cfg);
  std::cout << csv.str();
  return 0;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const json& cfg) {
  const long long instances = get_integer(cfg, "instances");
  const long long seed = get_integer(cfg, "seed");
  const long long density = get_integer(cfg, "density");
  const long long taus = get_integer(cfg, "taus");
  if (instances < 1 || density < 2 || taus < 2 || seed < 0)
    throw ValidationError("oracle needs instances >= 1, density >= 2, taus >= 2, seed >= 0");
  std::vector<Index> sizes;
  for (double s : get_numbers(cfg, "S")) {
    if (s < 1 || s > 4 || s != std::floor(s)) throw ValidationError("--S entries must be integers in [1, 4]");
    sizes.push_back(static_cast<Index>(s));
  }

  json per = json::array();
  bool all_ok = true;
  std::uint32_t stream = 0;
  for (Parameterization param : {Parameterization::increments, Parameterization::pretrend_shares,
                                 Parameterization::treatment_shares}) {
    for (Index S : sizes) {
      CounterStream rng(static_cast<std::uint64_t>(seed), stream++);
      double worst = 0.0;
      long long sharp_fail = 0, sharp_total = 0;
      std::string first_failure;
      for (long long i = 0; i < instances; ++i) {
        const RandomInstance inst = random_instance(param, S, rng);
        const Interval closed = closed_form_interval(inst.gamma, inst.bounds, inst.m);
        const Interval grid = grid_extremes(inst.gamma, inst.bounds, inst.m, static_cast<Index>(density));
        const double scale = std::max({1.0, std::abs(closed.lb), std::abs(closed.ub)});
        worst = std::max({worst, std::abs(closed.lb - grid.lb) / scale, std::abs(closed.ub - grid.ub) / scale});
        for (long long t = 0; t < taus; ++t) {
          const double tau = t + 1 == taus ? closed.ub
                                           : closed.lb + (closed.ub - closed.lb) * static_cast<double>(t) /
                                                             static_cast<double>(taus - 1);
          ++sharp_total;
          const DgpSpec spec = construct_sharp_dgp(inst.gamma, tau, inst.bounds, inst.m);
          const Verification v = verify_dgp(spec, inst.gamma, inst.bounds, inst.m);
          if (!v) {
            ++sharp_fail;
            if (first_failure.empty()) first_failure = v.reasons.front();
          }
        }
      }
      const bool ok = worst <= 1e-12 && sharp_fail == 0;
      all_ok = all_ok && ok;
      json entry{{"parameterization", to_string(param)},
                 {"S", S},
                 {"instances", instances},
                 {"max_relative_gap", worst},
                 {"sharpness_checks", sharp_total},
                 {"sharpness_failures", sharp_fail},
                 {"pass", ok}};
      if (!first_failure.empty()) entry["first_failure"] = first_failure;
      per.push_back(entry);
      std::cout << (ok ? "PASS" : "FAIL") << " " << to_string(param) << " S=" << S
                << " max_rel_gap=" << format_double(worst) << " sharpness_failures=" << sharp_fail << "\n";
    }
  }
  const std::filesystem::path dir = prepare_out_dir(cfg);
  emit(dir, "report.json", dump(json{{"checks", per}, {"pass", all_ok}}));
  emit_config(dir, "oracle", cfg);
  return all_ok ? 0 : 4;
}

void add_bound_values(CommandConfig& c) {
  c.add("param", Kind::text, "parameterization: a (increments), p (pre-trend shares), k (treatment shares)");
  c.add("lo", Kind::numbers, "lower bound(s); one value is broadcast over periods", json::array({0.0}));
  c.add("hi", Kind::numbers, "upper bound(s); one value is broadcast over periods", json::array({0.0}));
}

void add_axis(CommandConfig& c) {
  c.add("vary", Kind::text, "axis: lower, upper or diagonal", "lower");
  c.add("from", Kind::number, "first axis value", 0.0);
  c.add("to", Kind::number, "last axis value", 1.0);
  c.add("points", Kind::integer, "number of axis points", 11);
  c.add("fixed", Kind::number, "value of the bound held fixed (lower/upper axes)");
}

}  // namespace

std::vector<std::unique_ptr<CommandConfig>> register_commands(CLI::App& app) {
  std::vector<std::unique_ptr<CommandConfig>> cmds;

  auto est = std::make_unique<CommandConfig>(app, "estimate", "Bootstrap posterior draws of the reduced form");
  est->add("panel", Kind::text, "panel CSV (unit_id,cluster_id,time,y,treated)");
  est->add("draws", Kind::integer, "number of bootstrap draws B", 2000);
  est->add("seed", Kind::integer, "RNG seed", 1);
  est->add("alpha", Kind::number, "interval level: [alpha/2, 1-alpha/2] quantiles", 0.1);
  est->add("format", Kind::text, "draws file format: csv or bin", "csv");
  est->add("frequentist", Kind::flag, "also run the cluster bootstrap", false);
  est->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(est));

  auto bnd = std::make_unique<CommandConfig>(app, "bounds", "Identified set for the first-period ATT");
  bnd->add("gamma", Kind::text, "reduced-form JSON {\"pre_trends\": [...], \"theta1\": x}");
  add_bound_values(*bnd);
  bnd->add("M", Kind::number, "relative magnitude bound M >= 0");
  bnd->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(bnd));

  auto fr = std::make_unique<CommandConfig>(app, "frontier", "Breakdown frontier over a parameter axis");
  fr->add("gamma", Kind::text, "reduced-form JSON (plug-in frontier)");
  fr->add("draws", Kind::text, "posterior draws file (per-draw frontiers)");
  fr->add("param", Kind::text, "parameterization: p or k", "p");
  fr->add("conclusion", Kind::text, "negative (ATT < 0) or above (ATT > tau)", "negative");
  fr->add("tau", Kind::number, "threshold for the 'above' conclusion");
  add_axis(*fr);
  fr->add("svg", Kind::flag, "also write frontier.svg", false);
  fr->add("m_cap", Kind::number, "plot cap for unbounded values", 100.0);
  fr->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(fr));

  auto bd = std::make_unique<CommandConfig>(app, "band", "Simultaneous lower credible band for a frontier");
  bd->add("frontier_draws", Kind::text, "frontier_draws.csv written by 'frontier --draws'");
  bd->add("alpha", Kind::number, "one minus the credibility level", 0.1);
  bd->add("svg", Kind::flag, "also write band.svg", false);
  bd->add("m_cap", Kind::number, "plot cap for unbounded values", 100.0);
  bd->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(bd));

  auto cs = std::make_unique<CommandConfig>(app, "credset", "Pointwise credible sets for the identified set");
  cs->add("draws", Kind::text, "posterior draws file");
  cs->add("interval_draws", Kind::text, "CSV with columns lb,ub (alternative to --draws)");
  add_bound_values(*cs);
  cs->add("M", Kind::numbers, "one or more relative magnitude bounds");
  cs->add("alpha", Kind::number, "one minus the credibility level", 0.1);
  cs->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(cs));

  auto orc = std::make_unique<CommandConfig>(app, "oracle", "Closed forms versus lattice search and sharp DGPs");
  orc->add("instances", Kind::integer, "random instances per parameterization and S", 50);
  orc->add("seed", Kind::integer, "instance seed", 1);
  orc->add("S", Kind::numbers, "numbers of pre-trends to test", json::array({1, 2, 3}));
  orc->add("density", Kind::integer, "lattice points per axis (ends included)", 7);
  orc->add("taus", Kind::integer, "targets per instance for the sharpness check", 20);
  orc->add("out", Kind::text, "output directory");
  cmds.push_back(std::move(orc));

  return cmds;
}

int run_command(const std::string& name, const json& cfg) {
  if (name == "estimate") return cmd_estimate(cfg);
  if (name == "bounds") return cmd_bounds(cfg);
  if (name == "frontier") return cmd_frontier(cfg);
  if (name == "band") return cmd_band(cfg);
  if (name == "credset") return cmd_credset(cfg);
  if (name == "oracle") return cmd_oracle(cfg);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace didsens::cli
