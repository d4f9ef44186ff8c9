#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <slabrt/errors.hpp>

#include "slabrt_cli/commands.hpp"
#include "slabrt_cli/run_config.hpp"
#include "slabrt_cli/writers.hpp"

int main(int argc, char** argv) {
  using namespace slabrt::cli;

  CLI::App app{"Linear Rayleigh-Taylor growth in a slab with Navier-slip walls", "slab-rt"};
  std::string command;
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<double> xi, epsilon, m0, delta, lambda;
  std::optional<std::string> out, formats, variant;

  app.add_option("command", command, "check | critical | dispersion | mode | evolve | escape")
      ->required()
      ->check(CLI::IsMember({"check", "critical", "dispersion", "mode", "evolve", "escape"}));
  app.add_option("--config", config_path, "INI run configuration")->required();
  app.add_option("--xi", xi, "horizontal frequency for mode and evolve");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", formats, "comma-separated subset of csv,json,svg");
  app.add_option("--set", sets, "override a config entry: section.key=value");
  app.add_option("--epsilon", epsilon, "escape: epsilon (variant A) or epsilon0 (variant B)");
  app.add_option("--m0", m0, "escape: m0 (variant A only)");
  app.add_option("--delta", delta, "escape: initial scale delta");
  app.add_option("--variant", variant, "escape: A or B");
  app.add_option("--lambda", lambda, "escape: use this rate instead of scanning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ExitCode::InvalidInput;
  }

  std::vector<std::string> overrides = sets;
  auto flag = [&](const char* key, const std::string& value) {
    overrides.push_back(std::string(key) + "=" + value);
  };
  if (xi) flag("mode.xi", format_double(*xi));
  if (out) flag("output.dir", *out);
  if (formats) flag("output.formats", *formats);
  if (epsilon) flag("escape.epsilon", format_double(*epsilon));
  if (m0) flag("escape.m0", format_double(*m0));
  if (delta) flag("escape.delta", format_double(*delta));
  if (variant) flag("escape.variant", *variant);
  if (lambda) flag("escape.lambda", format_double(*lambda));

  RunConfig config;
  try {
    config = load_run_config(config_path, overrides);
  } catch (const slabrt::Error& e) {
    std::cerr << "slab-rt: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return run_command(command, config, std::cout, std::cerr);
}
