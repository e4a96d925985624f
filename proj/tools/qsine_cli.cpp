// Command-line front end: qsine_cli <command> [--key value ...] [--config file.toml]
//
// Every recognized key is a plain flag; the config file holds the same keys as
// flat `key = value` lines and is overridden by flags given on the command line.

#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsine/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"q-sine spectral toolkit"};
  app.set_config("--config", "", "TOML file of key = value pairs");

  std::ostringstream commands;
  for (const auto& name : qsine::command_names()) commands << ' ' << name;

  std::string command;
  app.add_option("command", command, "one of:" + commands.str())->required();

  std::string output_dir = ".";
  app.add_option("--output_dir,--out", output_dir, "directory for CSV files and manifest.json");
  std::string seed;
  app.add_option("--seed", seed, "base seed for random sources and noise");

  const auto params = qsine::all_params();
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& spec : params) {
    std::string help = spec.help;
    if (!spec.fallback.empty()) help += " (default " + spec.fallback + ")";
    options[spec.key] = app.add_option("--" + spec.key, values[spec.key], help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsine::exit_usage;
  }

  qsine::RunConfig config;
  config.command = command;
  config.output_dir = output_dir;
  for (const auto& [key, option] : options) {
    if (option->count() > 0) config.params[key] = values[key];
  }
  if (!seed.empty()) {
    try {
      std::size_t used = 0;
      config.seed = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument(seed);
    } catch (const std::exception&) {
      std::cerr << "error: --seed must be a non-negative integer\n";
      return qsine::exit_usage;
    }
  }

  return qsine::run(config, std::cout).exit_code;
}
