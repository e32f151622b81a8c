#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "degen/cli.hpp"
#include "degen/errors.hpp"

int main(int argc, char** argv) {
  using namespace degen;
  CLI::App app{"Numerical lab for regularized widely degenerate parabolic equations"};
  app.footer("Subcommands: check-inequalities, solve, seminorm, sweep KIND, report\n"
             "Sweep kinds: energy, comparison, sobolev, time-derivative, fractional\n\n" +
             exit_code_table());
  std::string command, kind, config_path, out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "Subcommand (overrides run.subcommand)");
  app.add_option("kind", kind, "Sweep kind for the sweep subcommand");
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_dir, "Output directory (overrides run.output)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Campaign seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  CliOverrides ov;
  if (!command.empty()) {
    const auto& names = subcommand_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
      print_failure(std::cerr, kExitUsage, "usage", "unknown subcommand '" + command + "'");
      return kExitUsage;
    }
    ov.subcommand = command;
  }
  if (!kind.empty()) ov.sweep_kind = kind;
  if (!out_dir.empty()) ov.output_dir = out_dir;
  ov.threads = threads;
  ov.seed = seed;

  RunConfig config;
  try {
    config = config_path.empty() ? parse_config_text("", ov) : parse_config(config_path, ov);
  } catch (const ConfigValidationError& e) {
    for (const auto& f : e.failures()) std::cerr << "config: " << f << "\n";
    print_failure(std::cerr, kExitConfig, "config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    const auto [code, name] = classify_error(e);
    print_failure(std::cerr, code, name, e.what());
    return code;
  }
  return dispatch(config, std::cout, std::cerr);
}
