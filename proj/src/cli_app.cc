#include "ridge/cli_app.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ridge/baselines.h"
#include "ridge/dynamics.h"
#include "ridge/errors.h"
#include "ridge/reports.h"
#include "ridge/run_config.h"
#include "ridge/svg_plot.h"
#include "ridge/trajectory_io.h"
#include "ridge/verify.h"

namespace ridge {

int exit_code_for(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::kSolved: return kExitOk;
    case TerminalStatus::kMaxEpochs:
    case TerminalStatus::kMaxSteps: return kExitBudget;
    case TerminalStatus::kAssumptionViolation: return kExitAssumption;
  }
  return kExitUsage;
}

void configure_logging() {
  auto logger = spdlog::get("ridge_solver");
  if (!logger) logger = spdlog::stderr_color_mt("ridge_solver");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RIDGE_SOLVER_LOG")) {
    const auto lvl = spdlog::level::from_str(env);
    // from_str maps unknown names to off; keep the default for those.
    if (lvl != spdlog::level::off || std::string(env) == "off") spdlog::set_level(lvl);
  }
}

namespace {

struct Flags {
  std::string config;
  std::string problem;
  std::string method;
  double gamma = 0;
  double epsilon = 0;
  double alpha = 0;
  double eta = 0;
  double lambda = 0;
  std::int64_t steps = 0;
  std::vector<std::string> inits;
  bool no_ridge_correction = false;
  std::string out;
  std::uint64_t seed = 0;
  bool quiet = false;
};

struct RunOptions {
  CLI::Option* problem;
  CLI::Option* method;
  CLI::Option* gamma;
  CLI::Option* epsilon;
  CLI::Option* alpha;
  CLI::Option* eta;
  CLI::Option* lambda;
  CLI::Option* steps;
  CLI::Option* init;
  CLI::Option* out;
  CLI::Option* seed;
};

RunOptions add_run_options(CLI::App* sub, Flags& f, bool with_method) {
  RunOptions o{};
  sub->add_option("--config", f.config, "JSON run configuration (schema 1)");
  o.problem = sub->add_option("--problem", f.problem, "builtin problem: f1, f2, bilinear, neg_square");
  if (with_method) {
    o.method = sub->add_option("--method", f.method, "stonr, gda, eg, ogda or ftr");
  }
  o.gamma = sub->add_option("--gamma", f.gamma, "STON'R step size");
  o.epsilon = sub->add_option("--epsilon", f.epsilon, "exit tolerance");
  o.alpha = sub->add_option("--alpha", f.alpha, "termination gap");
  o.eta = sub->add_option("--eta", f.eta, "baseline step size");
  o.lambda = sub->add_option("--lambda", f.lambda, "FtR damping");
  o.steps = sub->add_option("--steps", f.steps, "baseline iterations or STON'R steps per epoch");
  o.init = sub->add_option("--init", f.inits, "baseline start point x,y (repeatable)");
  sub->add_flag("--no-ridge-correction", f.no_ridge_correction, "disable the Newton pull-back");
  o.out = sub->add_option("--out", f.out, "output directory");
  o.seed = sub->add_option("--seed", f.seed, "perturbation seed");
  sub->add_flag("-q,--quiet", f.quiet, "write files only, print nothing on success");
  return o;
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw ConfigError("--init: bad coordinate '" + tok + "'");
    v.push_back(x);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return v;
}

RunConfig build_config(const Flags& f, const RunOptions& o) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (o.problem->count()) {
    c.problem = f.problem;
    c.affine.reset();
  }
  if (o.method && o.method->count()) c.method = f.method;
  if (o.gamma->count()) c.gamma = f.gamma;
  if (o.epsilon->count()) c.epsilon = f.epsilon;
  if (o.alpha->count()) c.alpha = f.alpha;
  if (o.eta->count()) c.eta = f.eta;
  if (o.lambda->count()) c.lambda = f.lambda;
  if (o.steps->count()) c.steps = f.steps;
  if (o.init->count()) {
    c.inits.clear();
    for (const auto& s : f.inits) c.inits.push_back(parse_point(s));
  }
  if (f.no_ridge_correction) c.ridge_correction = false;
  if (o.out->count()) c.out = f.out;
  if (o.seed->count()) c.seed = f.seed;
  c.validate();
  return c;
}

std::string problem_label(const RunConfig& c) { return c.affine ? c.affine->name : c.problem; }

Trajectory run_method(const VIProblem& p, const RunConfig& c, const std::string& method,
                      const Vector& init) {
  if (method == "stonr") return run_stonr(p, c.solver_config());
  BaselineMethod m = c.baseline_method();
  m.kind = baseline_kind_from_string(method);
  return run_baseline(p, m, init);
}

std::filesystem::path prepare_out(const RunConfig& c) {
  std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_solve(const RunConfig& c, bool quiet) {
  const VIProblem p = c.make_problem();
  const Vector init = c.init_points(p.domain()).front();
  const Trajectory traj = run_method(p, c, c.method, init);
  const auto dir = prepare_out(c);
  const std::string stem = problem_label(c) + "_" + c.method;
  write_trajectory(traj, (dir / (stem + ".csv")).string());
  const std::string summary = run_summary_json(p, c.method, traj);
  write_text_file((dir / (stem + "_summary.json")).string(), summary);
  if (!quiet) std::cout << summary;
  return exit_code_for(traj.status);
}

int cmd_compare(const RunConfig& c, bool quiet) {
  const VIProblem p = c.make_problem();
  const std::vector<Vector> inits = c.init_points(p.domain());
  struct Job {
    std::string method;
    int init_index;
    std::optional<Trajectory> traj;
    std::string error;
  };
  std::vector<Job> jobs;
  jobs.push_back({"stonr", -1, std::nullopt, ""});
  for (const auto& m : method_names()) {
    if (m == "stonr") continue;
    for (std::size_t k = 0; k < inits.size(); ++k) jobs.push_back({m, static_cast<int>(k), std::nullopt, ""});
  }

  const auto dir = prepare_out(c);
  const std::string label = problem_label(c);
  auto stem_of = [&](const Job& j) {
    return label + "_" + j.method + (j.init_index < 0 ? "" : "_" + std::to_string(j.init_index + 1));
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      Job& j = jobs[k];
      try {
        const Vector init = j.init_index < 0 ? Vector::Zero(p.dimension()) : inits[j.init_index];
        j.traj = run_method(p, c, j.method, init);
        write_trajectory(*j.traj, (dir / (stem_of(j) + ".csv")).string());
      } catch (const std::exception& err) {
        j.error = err.what();
      }
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(hw, jobs.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<PlotSeries> series;
  for (const auto& j : jobs) {
    if (!j.error.empty()) {
      std::cerr << stem_of(j) << ": " << j.error << "\n";
      continue;
    }
    if (!quiet) {
      std::cout << stem_of(j) << ": " << to_string(j.traj->status) << " at (";
      const Vector& x = j.traj->records.back().x;
      for (int d = 0; d < x.size(); ++d) std::cout << (d ? ", " : "") << x[d];
      std::cout << ")\n";
    }
    series.push_back({stem_of(j), &*j.traj});
  }
  if (p.dimension() == 2 && !series.empty()) {
    write_svg(series, (dir / (label + "_compare.svg")).string(), label);
  } else if (p.dimension() != 2) {
    std::cerr << "skipping the SVG: plots need a two-dimensional problem\n";
  }
  if (!jobs.front().error.empty()) return kExitUsage;
  return exit_code_for(jobs.front().traj->status);
}

int cmd_check(const RunConfig& c, bool quiet) {
  const VIProblem p = c.make_problem();
  const SolverConfig sc = c.solver_config();
  const Trajectory traj = run_stonr(p, sc);
  AssumptionTolerances at;
  at.zero_tol = sc.epsilon;
  at.boundary_tol = sc.boundary_tol;
  const AssumptionReport a = check_assumptions(p, samples_from_trajectory(traj), at);
  const ParityReport r = parity_diagnostics(p, traj, sc);
  // The square-block form of A1 is reported but does not decide the verdict.
  const bool passed = r.all_passed() && a.a1_restricted != CheckStatus::kFail &&
                      a.a2 != CheckStatus::kFail && a.a3 != CheckStatus::kFail;
  const std::string doc = check_report_json(p, a, r, passed);
  const auto dir = prepare_out(c);
  write_text_file((dir / (problem_label(c) + "_check.json")).string(), doc);
  if (!quiet) std::cout << doc;
  return passed ? kExitOk : kExitAssumption;
}

int cmd_plot(const std::string& input, std::string output) {
  const Trajectory traj = read_trajectory(input);
  if (traj.records.empty()) throw ConfigError("'" + input + "' has no trajectory rows");
  if (output.empty()) output = std::filesystem::path(input).replace_extension(".svg").string();
  write_svg({{std::filesystem::path(input).stem().string(), &traj}}, output,
            std::filesystem::path(input).filename().string());
  std::cout << output << "\n";
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Ridge-following min-max solver and baselines"};
  app.require_subcommand(1);

  Flags solve_f;
  Flags compare_f;
  Flags check_f;
  auto* solve = app.add_subcommand("solve", "run one method on one problem");
  const RunOptions solve_o = add_run_options(solve, solve_f, true);
  auto* compare = app.add_subcommand("compare", "run every method on one problem");
  const RunOptions compare_o = add_run_options(compare, compare_f, false);
  auto* check = app.add_subcommand("check", "assumption and parity reports for a STON'R run");
  const RunOptions check_o = add_run_options(check, check_f, false);
  auto* plot = app.add_subcommand("plot", "render a trajectory CSV as SVG");
  std::string plot_in;
  std::string plot_out;
  plot->add_option("input", plot_in, "trajectory CSV")->required();
  plot->add_option("-o,--output", plot_out, "SVG path (default: input with .svg)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(build_config(solve_f, solve_o), solve_f.quiet);
    if (*compare) return cmd_compare(build_config(compare_f, compare_o), compare_f.quiet);
    if (*check) return cmd_check(build_config(check_f, check_o), check_f.quiet);
    if (*plot) return cmd_plot(plot_in, plot_out);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const RidgeError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.kind() == ErrorKind::kSingularCorrection ? kExitUsage : kExitAssumption;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return dispatch(args);
}

}  // namespace ridge
