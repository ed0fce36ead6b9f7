#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace didsens::cli {

enum class Kind { text, number, integer, flag, numbers };

// Options of one subcommand. Each value resolves from the command line
// first, then the JSON --config file, then the declared default.
class CommandConfig {
 public:
  CommandConfig(CLI::App& parent, const std::string& name, const std::string& description);

  void add(const std::string& key, Kind kind, const std::string& help,
           nlohmann::json default_value = nullptr);

  CLI::App& app() { return *app_; }
  bool parsed() const { return app_->parsed(); }

  // Merged, type-checked values; null for unset optional keys.
  nlohmann::json resolve() const;

 private:
  struct Entry {
    std::string key;
    Kind kind;
    nlohmann::json default_value;
    std::string raw;
    bool flag_value = false;
    CLI::Option* option = nullptr;
  };

  CLI::App* app_;
  std::string config_path_;
  std::vector<Entry*> order_;
  std::map<std::string, Entry> entries_;
};

// Typed accessors over a resolved config.
std::string get_text(const nlohmann::json& cfg, const std::string& key);
double get_number(const nlohmann::json& cfg, const std::string& key);
long long get_integer(const nlohmann::json& cfg, const std::string& key);
std::vector<double> get_numbers(const nlohmann::json& cfg, const std::string& key);
bool has(const nlohmann::json& cfg, const std::string& key);

}  // namespace didsens::cli
