#include "commands.hpp"

#include "didsens/types.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Sensitivity analysis for difference-in-differences under anticipation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "did-sens 1.0.0");
  auto commands = didsens::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& c : commands) {
      if (c->parsed()) return didsens::cli::run_command(c->app().get_name(), c->resolve());
    }
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const didsens::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const didsens::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const didsens::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
