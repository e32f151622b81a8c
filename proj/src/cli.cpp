#include "degen/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "degen/errors.hpp"
#include "degen/seminorms.hpp"

namespace degen {
namespace {

constexpr const char* kToolVersion = "degenlab 0.1.0";

namespace pt = boost::property_tree;
using nlohmann::json;

const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names{"lp",     "lp_grad",         "sup_l2",
                                              "gagliardo", "besov",        "parabolic_besov",
                                              "nikolskii", "nikolskii_grad", "grad_v"};
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Typed lookups that record failures instead of throwing.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& failures)
      : tree_(tree), failures_(failures) {}

  bool has(const std::string& key) {
    known_.insert(key);
    return tree_.get_optional<std::string>(key).has_value();
  }

  void required(const std::string& key) {
    if (!has(key)) failures_.push_back("missing key " + key);
  }

  void text(const std::string& key, std::string& dst) {
    if (has(key)) dst = trim(tree_.get<std::string>(key));
  }

  void number(const std::string& key, double& dst) {
    if (!has(key)) return;
    if (auto v = parse_double(key, tree_.get<std::string>(key))) dst = *v;
  }

  void number(const std::string& key, std::optional<double>& dst) {
    if (!has(key)) return;
    if (auto v = parse_double(key, tree_.get<std::string>(key))) dst = *v;
  }

  template <class Int>
  void integer(const std::string& key, Int& dst) {
    if (!has(key)) return;
    if (auto v = parse_int(key, tree_.get<std::string>(key))) {
      if (*v < static_cast<long long>(std::numeric_limits<Int>::min()) ||
          static_cast<unsigned long long>(*v) > static_cast<unsigned long long>(std::numeric_limits<Int>::max())) {
        failures_.push_back(key + ": value " + std::to_string(*v) + " out of range");
      } else {
        dst = static_cast<Int>(*v);
      }
    }
  }

  void number_list(const std::string& key, std::vector<double>& dst) {
    if (!has(key)) return;
    std::vector<double> out;
    for (const auto& item : split(tree_.get<std::string>(key))) {
      auto v = parse_double(key, item);
      if (!v) return;
      out.push_back(*v);
    }
    dst = out;
  }

  void int_list(const std::string& key, std::vector<int>& dst) {
    if (!has(key)) return;
    std::vector<int> out;
    for (const auto& item : split(tree_.get<std::string>(key))) {
      auto v = parse_int(key, item);
      if (!v) return;
      out.push_back(static_cast<int>(*v));
    }
    dst = out;
  }

  void text_list(const std::string& key, std::vector<std::string>& dst) {
    if (has(key)) dst = split(tree_.get<std::string>(key));
  }

  void report_unknown() {
    for (const auto& [section, body] : tree_) {
      if (body.empty()) {
        failures_.push_back("unexpected top-level key " + section);
        continue;
      }
      for (const auto& [key, value] : body) {
        const std::string full = section + "." + key;
        if (!known_.count(full)) failures_.push_back("unknown key " + full);
      }
    }
  }

 private:
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  std::optional<double> parse_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    failures_.push_back(key + ": expected a number, got '" + s + "'");
    return std::nullopt;
  }

  std::optional<long long> parse_int(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    failures_.push_back(key + ": expected an integer, got '" + s + "'");
    return std::nullopt;
  }

  const pt::ptree& tree_;
  std::vector<std::string>& failures_;
  std::set<std::string> known_;
};

json grid_json(const SpaceTimeGrid& g) {
  return {{"length", g.length}, {"cells", g.cells}, {"t_begin", g.t_begin},
          {"t_end", g.t_end},   {"steps", g.steps}};
}

json config_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  if (!c.sweep_kind.empty()) j["sweep_kind"] = c.sweep_kind;
  j["threads"] = c.threads;
  const DegenParams prm = c.params();
  j["params"] = {{"p", prm.p()}, {"lambda", prm.lambda()}, {"alpha", prm.alpha()}, {"eps", prm.eps()}};
  j["problem"] = c.problem;
  j["grid"] = grid_json(c.grid);
  j["newton"] = {{"residual_tol", c.newton.residual_tol},
                 {"max_iters", c.newton.max_iters},
                 {"min_step", c.newton.min_step},
                 {"linear_tol", c.newton.linear_tol},
                 {"linear_max_iters", c.newton.linear_max_iters}};
  j["sweep"] = {{"eps_list", c.sweep.eps_list},
                {"r", c.sweep.radius_r},
                {"rho", c.sweep.radius_rho},
                {"R", c.sweep.radius_R},
                {"center", {c.sweep.center.x(), c.sweep.center.y()}},
                {"nikolskii_shifts", c.sweep.nikolskii_shift_cells}};
  j["campaign"] = {{"num_samples", c.campaign.num_samples},
                   {"p_values", c.campaign.p_values},
                   {"lambda_values", c.campaign.lambda_values},
                   {"magnitude_range", {c.campaign.magnitude_range.first, c.campaign.magnitude_range.second}},
                   {"seed", c.campaign.seed},
                   {"slack", c.campaign.slack}};
  j["seminorm"] = {{"input", c.seminorm.input.string()},
                   {"estimators", c.seminorm.estimators},
                   {"s", c.seminorm.s},
                   {"p", c.seminorm.p},
                   {"q", c.seminorm.q},
                   {"level", c.seminorm.level},
                   {"radius", c.seminorm.radius},
                   {"center", {c.seminorm.center.x(), c.seminorm.center.y()}},
                   {"shifts", c.seminorm.shift_cells}};
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << body;
  if (!f) throw IoError("write failed for " + path.string());
}

void write_manifest(const RunConfig& c, const std::string& name, const json& result) {
  json j;
  j["tool_version"] = kToolVersion;
  j["config"] = config_json(c);
  j["result"] = result;
  j["passed"] = result.value("passed", true);
  write_text(c.output_dir / ("manifest_" + name + ".json"), j.dump(2) + "\n");
}

int run_check_inequalities(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SampleConfig sc = c.campaign;
  sc.threads = c.threads;
  const CampaignReport report = run_campaign(sc);
  std::ostringstream csv, summary;
  write_campaign_csv(csv, report);
  write_campaign_summary(summary, report);
  write_text(c.output_dir / "campaign.csv", csv.str());
  write_text(c.output_dir / "campaign_summary.txt", summary.str());
  write_manifest(c, "check-inequalities",
                 {{"passed", report.passed()},
                  {"total_samples", report.total_samples},
                  {"total_violations", report.total_violations()}});
  out << summary.str();
  if (!report.passed()) {
    print_failure(err, kExitCheckFailed, "inequality_violation",
                  std::to_string(report.total_violations()) + " violations");
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run_solve(const RunConfig& c, std::ostream& out) {
  const ProblemSpec spec = manufactured_problem(c.problem, c.grid, c.params());
  const Solution sol = solve_cauchy_dirichlet(spec, c.newton);
  const DegenParams prm = c.params();
  const json meta{{"problem", c.problem},
                  {"params", {{"p", prm.p()}, {"lambda", prm.lambda()}, {"alpha", prm.alpha()}, {"eps", prm.eps()}}}};
  save_trajectory(sol.trajectory, c.output_dir / "solution.bin", meta.dump());
  std::ostringstream csv;
  csv << std::setprecision(10);
  write_solve_report_csv(csv, sol.report);
  write_text(c.output_dir / "solve_report.csv", csv.str());
  double deviation = 0.0;
  const Trajectory ref = sample_reference(spec);
  for (std::size_t k = 0; k < ref.levels.size(); ++k) {
    for (std::size_t q = 0; q < ref.levels[k].values().size(); ++q) {
      deviation = std::max(deviation, std::abs(ref.levels[k].values()[q] -
                                               sol.trajectory.levels[k].values()[q]));
    }
  }
  write_manifest(c, "solve",
                 {{"passed", true},
                  {"steps", sol.report.steps.size()},
                  {"newton_iterations", sol.report.total_iterations()},
                  {"max_final_residual", sol.report.max_residual()},
                  {"max_deviation_from_reference", deviation},
                  {"reference_is_exact", spec.exact}});
  out << "solved " << c.problem << ": " << sol.report.steps.size() << " steps, "
      << sol.report.total_iterations() << " Newton iterations, max final residual "
      << sol.report.max_residual() << ", max |u - reference| " << deviation << "\n";
  return kExitOk;
}

int run_seminorm(const RunConfig& c, std::ostream& out) {
  const SeminormConfig& s = c.seminorm;
  const Trajectory traj = load_trajectory(s.input);
  const Cylinder cyl{s.center, s.vertex_time.value_or(traj.grid.t_end), s.radius};
  const Ball ball{s.center, s.radius};
  const int level = s.level < 0 ? traj.grid.steps : s.level;
  if (level > traj.grid.steps) throw InvalidInput("seminorm.level beyond the last time level");
  const ScalarField& slice = traj.levels[static_cast<std::size_t>(level)];
  SmoothnessOrder order;
  order.s = s.s;
  order.p = s.p;
  order.q = s.q;
  order.cutoff = s.cutoff.value_or(s.radius / 4.0);
  std::vector<double> shifts;
  for (int k : s.shift_cells) shifts.push_back(k * traj.grid.h());

  std::ostringstream region_cyl, region_ball;
  region_cyl << "Q(x=" << s.center.x() << ";y=" << s.center.y() << ";t0=" << cyl.vertex_time
             << ";radius=" << s.radius << ")";
  region_ball << "B(x=" << s.center.x() << ";y=" << s.center.y() << ";radius=" << s.radius
              << ";level=" << level << ")";
  std::ostringstream csv;
  csv << std::setprecision(12) << "estimator,region,value\n";
  for (const auto& name : s.estimators) {
    double value = 0.0;
    std::string region = region_cyl.str();
    if (name == "lp") {
      value = lp_norm_cylinder(traj, cyl, s.p);
    } else if (name == "lp_grad") {
      value = lp_norm_cylinder(gradient_trajectory(traj), cyl, s.p);
    } else if (name == "sup_l2") {
      value = sup_l2_in_time(traj, ball, cyl.t_low(), cyl.vertex_time);
    } else if (name == "gagliardo") {
      value = gagliardo_seminorm(slice, order, ball);
      region = region_ball.str();
    } else if (name == "besov") {
      value = besov_seminorm(slice, order, ball);
      region = region_ball.str();
    } else if (name == "parabolic_besov") {
      value = parabolic_besov_norm(traj, cyl, s.s, s.p);
    } else if (name == "nikolskii") {
      value = nikolskii_fit(traj, cyl, s.q, shifts).theta;
    } else if (name == "nikolskii_grad") {
      value = nikolskii_fit(gradient_trajectory(traj), cyl, s.q, shifts).theta;
    } else if (name == "grad_v") {
      value = grad_l2_of_v(traj, c.params(), cyl);
    }
    csv << name << ',' << region << ',' << value << '\n';
  }
  write_text(c.output_dir / "seminorm.csv", csv.str());
  write_manifest(c, "seminorm", {{"passed", true}, {"input", s.input.string()}});
  out << csv.str();
  return kExitOk;
}

SweepSpec sweep_from_config(const RunConfig& c) {
  SweepSpec s = c.sweep;
  s.problem = c.problem;
  s.p = c.p;
  s.lambda = c.lambda;
  s.alpha = c.alpha;
  s.grid = c.grid;
  s.newton = c.newton;
  s.threads = c.threads;
  return s;
}

int run_sweep_cmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SweepKind kind = sweep_kind_from_string(c.sweep_kind);
  const SweepReport report = run_sweep(kind, sweep_from_config(c));
  const std::string stem = "sweep_" + to_string(kind);
  std::ostringstream csv, manifest, summary;
  write_sweep_csv(csv, report);
  write_sweep_manifest(manifest, report);
  write_sweep_summary(summary, report);
  write_text(c.output_dir / (stem + ".csv"), csv.str());
  write_text(c.output_dir / (stem + ".json"), manifest.str());
  write_manifest(c, stem, {{"passed", report.passed()}, {"rows", report.rows.size()}});
  out << summary.str();
  if (!report.passed()) {
    print_failure(err, kExitCheckFailed, "sweep_assertion", to_string(kind) + " sweep assertions failed");
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_directory(c.output_dir)) {
    throw IoError("output directory " + c.output_dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> manifests;
  for (const auto& entry : std::filesystem::directory_iterator(c.output_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("manifest_", 0) == 0 && entry.path().extension() == ".json") {
      manifests.push_back(entry.path());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  int failed = 0;
  for (const auto& path : manifests) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path.string());
    const json j = json::parse(f);
    const bool passed = j.value("passed", false);
    if (!passed) ++failed;
    out << std::left << std::setw(44) << path.filename().string() << (passed ? "PASS" : "FAIL") << "\n";
  }
  out << manifests.size() << " manifest(s), " << failed << " failed\n";
  if (failed > 0) {
    print_failure(err, kExitCheckFailed, "report", std::to_string(failed) + " run(s) failed");
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace

void print_failure(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  json j{{"status", code == kExitCheckFailed ? "check_failed" : "error"},
         {"exit_code", code},
         {"kind", kind},
         {"message", message}};
  err << j.dump() << "\n";
}

std::string exit_code_table() {
  return "Exit codes:\n"
         "  0  success\n"
         "  1  a check or sweep assertion failed\n"
         "  2  usage error (unknown subcommand or flag)\n"
         "  3  configuration error\n"
         "  4  file input/output error\n"
         "  5  Newton nonconvergence\n"
         "  6  invalid input\n"
         "  7  invalid region\n"
         "  8  invalid shift\n"
         "  9  insufficient data\n"
         "  10 quadrature failure\n"
         "  11 unknown catalog entry\n"
         "  12 internal error\n";
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"check-inequalities", "solve", "seminorm", "sweep",
                                              "report"};
  return names;
}

DegenParams RunConfig::params() const {
  return alpha ? DegenParams(p, lambda, *alpha, eps) : DegenParams(p, lambda, eps);
}

RunConfig parse_config(const std::filesystem::path& path, const CliOverrides& overrides) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), overrides, path);
}

RunConfig parse_config_text(const std::string& text, const CliOverrides& overrides,
                            const std::filesystem::path& origin) {
  std::vector<std::string> failures;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigValidationError({std::string("malformed INI: ") + e.message() + " at line " +
                                 std::to_string(e.line())});
  }
  Reader r(tree, failures);
  RunConfig c;
  c.config_path = origin;

  std::string output;
  r.text("run.subcommand", c.subcommand);
  r.text("run.sweep", c.sweep_kind);
  r.text("run.output", output);
  if (!output.empty()) c.output_dir = output;
  r.integer("run.threads", c.threads);
  if (overrides.subcommand) c.subcommand = *overrides.subcommand;
  if (overrides.sweep_kind) c.sweep_kind = *overrides.sweep_kind;
  if (overrides.output_dir) c.output_dir = *overrides.output_dir;
  if (overrides.threads) c.threads = *overrides.threads;

  const bool needs_problem = c.subcommand == "solve" || c.subcommand == "sweep";
  if (needs_problem) {
    r.required("params.p");
    r.required("params.lambda");
    r.required("problem.name");
  }
  r.number("params.p", c.p);
  r.number("params.lambda", c.lambda);
  r.number("params.alpha", c.alpha);
  r.number("params.eps", c.eps);
  r.text("problem.name", c.problem);

  r.number("grid.length", c.grid.length);
  r.integer("grid.cells", c.grid.cells);
  r.number("grid.t_begin", c.grid.t_begin);
  r.number("grid.t_end", c.grid.t_end);
  r.integer("grid.steps", c.grid.steps);

  r.number("newton.residual_tol", c.newton.residual_tol);
  r.integer("newton.max_iters", c.newton.max_iters);
  r.number("newton.min_step", c.newton.min_step);
  r.number("newton.linear_tol", c.newton.linear_tol);
  r.integer("newton.linear_max_iters", c.newton.linear_max_iters);

  const double L = c.grid.length;
  c.sweep.radius_R = 0.4 * L;
  c.sweep.radius_rho = 0.3 * L;
  c.sweep.radius_r = 0.2 * L;
  c.sweep.center = {0.5 * L, 0.5 * L};
  r.number_list("sweep.eps_list", c.sweep.eps_list);
  r.number("sweep.r", c.sweep.radius_r);
  r.number("sweep.rho", c.sweep.radius_rho);
  r.number("sweep.R", c.sweep.radius_R);
  r.number("sweep.center_x", c.sweep.center.x());
  r.number("sweep.center_y", c.sweep.center.y());
  r.number("sweep.vertex_time", c.sweep.vertex_time);
  r.int_list("sweep.nikolskii_shifts", c.sweep.nikolskii_shift_cells);

  r.integer("campaign.num_samples", c.campaign.num_samples);
  r.number_list("campaign.p_values", c.campaign.p_values);
  r.number_list("campaign.lambda_values", c.campaign.lambda_values);
  r.number("campaign.magnitude_min", c.campaign.magnitude_range.first);
  r.number("campaign.magnitude_max", c.campaign.magnitude_range.second);
  r.integer("campaign.seed", c.campaign.seed);
  r.number("campaign.slack", c.campaign.slack);
  if (overrides.seed) c.campaign.seed = *overrides.seed;

  if (c.subcommand == "seminorm") {
    r.required("seminorm.input");
    r.required("seminorm.estimators");
  }
  std::string input;
  r.text("seminorm.input", input);
  r.text_list("seminorm.estimators", c.seminorm.estimators);
  r.number("seminorm.s", c.seminorm.s);
  r.number("seminorm.p", c.seminorm.p);
  r.number("seminorm.q", c.seminorm.q);
  r.number("seminorm.cutoff", c.seminorm.cutoff);
  r.integer("seminorm.level", c.seminorm.level);
  r.number("seminorm.radius", c.seminorm.radius);
  r.number("seminorm.center_x", c.seminorm.center.x());
  r.number("seminorm.center_y", c.seminorm.center.y());
  r.number("seminorm.vertex_time", c.seminorm.vertex_time);
  r.int_list("seminorm.shifts", c.seminorm.shift_cells);
  r.report_unknown();

  // Semantic checks.
  if (!contains(subcommand_names(), c.subcommand)) {
    failures.push_back("run.subcommand: unknown subcommand '" + c.subcommand + "'");
  }
  if (c.subcommand == "sweep") {
    try {
      sweep_kind_from_string(c.sweep_kind);
    } catch (const ConfigError&) {
      failures.push_back("run.sweep: unknown sweep kind '" + c.sweep_kind +
                         "' (energy, comparison, sobolev, time-derivative, fractional)");
    }
  }
  const double alpha = c.alpha.value_or(c.p >= 2.0 && c.lambda >= 0.0 && std::isfinite(c.p) &&
                                                std::isfinite(c.lambda)
                                            ? default_alpha(c.p, c.lambda)
                                            : 0.0);
  for (const auto& v : DegenParams::violations(c.p, c.lambda, alpha, c.eps)) failures.push_back("params: " + v);
  for (const auto& v : c.grid.violations()) failures.push_back(v);
  for (const auto& v : c.newton.violations()) failures.push_back(v);
  if (c.threads < 1) failures.emplace_back("run.threads must be >= 1");
  if (needs_problem && !contains(catalog_names(), c.problem)) {
    failures.push_back("problem.name: unknown problem '" + c.problem + "'");
  }
  if (c.subcommand == "solve" && !(c.eps > 0.0)) failures.emplace_back("params.eps must be > 0 to solve");
  if (c.subcommand == "sweep" && failures.empty()) {
    for (const auto& v : sweep_from_config(c).violations()) failures.push_back("sweep: " + v);
  }
  if (c.subcommand == "check-inequalities") {
    for (const auto& v : c.campaign.violations()) failures.push_back("campaign: " + v);
  }
  if (c.subcommand == "seminorm") {
    if (!input.empty()) {
      std::filesystem::path in(input);
      if (in.is_relative() && !origin.empty()) in = origin.parent_path() / in;
      c.seminorm.input = in;
      if (!std::filesystem::exists(in)) failures.push_back("seminorm.input: " + in.string() + " does not exist");
    }
    for (const auto& e : c.seminorm.estimators) {
      if (!contains(estimator_names(), e)) failures.push_back("seminorm.estimators: unknown estimator '" + e + "'");
    }
    if (!(c.seminorm.radius > 0.0)) failures.emplace_back("seminorm.radius must be > 0");
  }
  if (!failures.empty()) throw ConfigValidationError(std::move(failures));
  return c;
}

std::pair<int, std::string> classify_error(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return {kExitConfig, "config"};
  if (dynamic_cast<const IoError*>(&e)) return {kExitIo, "io"};
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return {kExitIo, "io"};
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return {kExitIo, "io"};
  if (dynamic_cast<const NonConvergence*>(&e)) return {kExitNonConvergence, "nonconvergence"};
  if (dynamic_cast<const InvalidInput*>(&e)) return {kExitInvalidInput, "invalid_input"};
  if (dynamic_cast<const InvalidRegion*>(&e)) return {kExitInvalidRegion, "invalid_region"};
  if (dynamic_cast<const InvalidShift*>(&e)) return {kExitInvalidShift, "invalid_shift"};
  if (dynamic_cast<const InsufficientData*>(&e)) return {kExitInsufficientData, "insufficient_data"};
  if (dynamic_cast<const QuadratureFailure*>(&e)) return {kExitQuadrature, "quadrature_failure"};
  if (dynamic_cast<const CatalogError*>(&e)) return {kExitCatalog, "catalog"};
  return {kExitInternal, "internal"};
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(config.output_dir);
    if (config.subcommand == "check-inequalities") return run_check_inequalities(config, out, err);
    if (config.subcommand == "solve") return run_solve(config, out);
    if (config.subcommand == "seminorm") return run_seminorm(config, out);
    if (config.subcommand == "sweep") return run_sweep_cmd(config, out, err);
    if (config.subcommand == "report") return run_report(config, out, err);
    print_failure(err, kExitUsage, "usage", "unknown subcommand '" + config.subcommand + "'");
    return kExitUsage;
  } catch (const std::exception& e) {
    const auto [code, kind] = classify_error(e);
    print_failure(err, code, kind, e.what());
    return code;
  }
}

}  // namespace degen
