#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degen/experiments.hpp"
#include "degen/inequality_suite.hpp"
#include "degen/solver.hpp"

namespace degen {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitIo = 4,
  kExitNonConvergence = 5,
  kExitInvalidInput = 6,
  kExitInvalidRegion = 7,
  kExitInvalidShift = 8,
  kExitInsufficientData = 9,
  kExitQuadrature = 10,
  kExitCatalog = 11,
  kExitInternal = 12,
};

/// One-line-per-code table for --help.
std::string exit_code_table();

struct SeminormConfig {
  std::filesystem::path input;
  std::vector<std::string> estimators;  // lp, lp_grad, sup_l2, gagliardo, besov,
                                        // parabolic_besov, nikolskii, nikolskii_grad, grad_v
  double s = 0.5;
  double p = 2.0;
  double q = 2.0;
  std::optional<double> cutoff;  // radius/4 when empty
  int level = -1;                // spatial estimators; -1 selects the last level
  double radius = 0.2;
  Eigen::Vector2d center{0.5, 0.5};
  std::optional<double> vertex_time;
  std::vector<int> shift_cells{1, 2, 4, 8};
};

struct RunConfig {
  std::string subcommand;
  std::string sweep_kind;
  std::filesystem::path config_path;
  std::filesystem::path output_dir = "out";
  unsigned threads = 1;

  double p = 2.0;
  double lambda = 0.0;
  std::optional<double> alpha;
  double eps = 1e-8;
  std::string problem = "heat_sine";
  SpaceTimeGrid grid{1.0, 48, 0.0, 0.16, 32};
  NewtonConfig newton;
  SweepSpec sweep;
  SampleConfig campaign;
  SeminormConfig seminorm;

  DegenParams params() const;
};

/// Values given on the command line; they win over the file.
struct CliOverrides {
  std::optional<std::string> subcommand;
  std::optional<std::string> sweep_kind;
  std::optional<std::filesystem::path> output_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& subcommand_names();

/// Reads an INI file (sections run, params, grid, problem, newton, sweep,
/// campaign, seminorm), applies overrides, and validates. Throws
/// ConfigValidationError listing every failure, IoError when unreadable.
RunConfig parse_config(const std::filesystem::path& path, const CliOverrides& overrides = {});

/// Same, from INI text (path used only for messages and relative inputs).
RunConfig parse_config_text(const std::string& text, const CliOverrides& overrides = {},
                            const std::filesystem::path& origin = {});

/// Runs the configured subcommand. Results go to `out`, files only under
/// config.output_dir, a JSON failure line to `err`. Returns an ExitCode.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Machine-readable failure line: {"status", "exit_code", "kind", "message"}.
void print_failure(std::ostream& err, int code, const std::string& kind, const std::string& message);

/// Exit code and short kind name for an exception from the library.
std::pair<int, std::string> classify_error(const std::exception& e);

}  // namespace degen
