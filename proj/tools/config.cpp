#include "config.hpp"

#include "didsens/io.hpp"
#include "didsens/types.hpp"

#include <cmath>
#include <sstream>

namespace didsens::cli {

using nlohmann::json;

namespace {

json parse_scalar(const std::string& key, Kind kind, const std::string& raw) {
  try {
    switch (kind) {
      case Kind::text: return raw;
      case Kind::number: return parse_double(raw);
      case Kind::integer: {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != raw.size()) throw ValidationError("trailing characters");
        return v;
      }
      case Kind::numbers: {
        json arr = json::array();
        std::stringstream ss(raw);
        std::string cell;
        while (std::getline(ss, cell, ',')) arr.push_back(parse_double(cell));
        if (arr.empty()) throw ValidationError("empty list");
        return arr;
      }
      case Kind::flag: return raw == "true" || raw == "1";
    }
  } catch (const std::exception& e) {
    throw ValidationError("option --" + key + ": cannot parse '" + raw + "'");
  }
  return nullptr;
}

json check_file_value(const std::string& key, Kind kind, const json& v) {
  auto bad = [&]() { return ValidationError("config key '" + key + "' has the wrong type"); };
  switch (kind) {
    case Kind::text:
      if (!v.is_string()) throw bad();
      return v;
    case Kind::number:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_double(v.get<std::string>());
      throw bad();
    case Kind::integer:
      if (!v.is_number_integer()) throw bad();
      return v;
    case Kind::flag:
      if (!v.is_boolean()) throw bad();
      return v;
    case Kind::numbers: {
      if (v.is_number()) return json::array({v.get<double>()});
      if (v.is_string()) return parse_scalar(key, kind, v.get<std::string>());
      if (!v.is_array() || v.empty()) throw bad();
      json arr = json::array();
      for (const auto& e : v) {
        if (!e.is_number()) throw bad();
        arr.push_back(e.get<double>());
      }
      return arr;
    }
  }
  throw bad();
}

}  // namespace

CommandConfig::CommandConfig(CLI::App& parent, const std::string& name, const std::string& description)
    : app_(parent.add_subcommand(name, description)) {
  app_->add_option("--config", config_path_, "JSON file with option values (flags override it)");
}

void CommandConfig::add(const std::string& key, Kind kind, const std::string& help, json default_value) {
  Entry& e = entries_[key];
  e.key = key;
  e.kind = kind;
  e.default_value = std::move(default_value);
  const std::string flag = "--" + key;
  if (kind == Kind::flag) {
    e.option = app_->add_flag(flag, e.flag_value, help);
  } else {
    e.option = app_->add_option(flag, e.raw, help);
    // Allow negative numbers such as "--lo -0.5".
    e.option->allow_extra_args(false);
  }
  order_.push_back(&e);
}

json CommandConfig::resolve() const {
  json file = json::object();
  if (!config_path_.empty()) {
    try {
      file = json::parse(read_file(config_path_));
    } catch (const json::exception& ex) {
      throw ValidationError(config_path_ + ": invalid JSON: " + ex.what());
    }
    if (!file.is_object()) throw ValidationError(config_path_ + ": config must be a JSON object");
    for (const auto& [k, v] : file.items()) {
      if (!entries_.count(k)) throw ValidationError(config_path_ + ": unknown config key '" + k + "'");
    }
  }
  json out = json::object();
  for (const Entry* e : order_) {
    if (e->option->count() > 0) {
      out[e->key] = e->kind == Kind::flag ? json(e->flag_value) : parse_scalar(e->key, e->kind, e->raw);
    } else if (file.contains(e->key)) {
      out[e->key] = check_file_value(e->key, e->kind, file.at(e->key));
    } else {
      out[e->key] = e->default_value;
    }
  }
  return out;
}

bool has(const json& cfg, const std::string& key) { return cfg.contains(key) && !cfg.at(key).is_null(); }

namespace {
const json& need(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) throw ValidationError("missing required option --" + key);
  return cfg.at(key);
}
}  // namespace

std::string get_text(const json& cfg, const std::string& key) { return need(cfg, key).get<std::string>(); }

double get_number(const json& cfg, const std::string& key) {
  const double v = need(cfg, key).get<double>();
  if (!std::isfinite(v)) throw ValidationError("option --" + key + " must be finite");
  return v;
}

long long get_integer(const json& cfg, const std::string& key) { return need(cfg, key).get<long long>(); }

std::vector<double> get_numbers(const json& cfg, const std::string& key) {
  std::vector<double> v = need(cfg, key).get<std::vector<double>>();
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("option --" + key + " must be finite");
  }
  return v;
}

}  // namespace didsens::cli
