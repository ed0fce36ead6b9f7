#pragma once

#include "config.hpp"

#include <memory>
#include <vector>

namespace didsens::cli {

std::vector<std::unique_ptr<CommandConfig>> register_commands(CLI::App& app);

// Runs the parsed subcommand; returns the process exit code.
int run_command(const std::string& name, const nlohmann::json& cfg);

}  // namespace didsens::cli
