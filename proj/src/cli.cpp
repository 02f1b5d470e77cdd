#include "fierg/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fierg/basis.hpp"
#include "fierg/config.hpp"
#include "fierg/diagnostics.hpp"
#include "fierg/dmh.hpp"
#include "fierg/errors.hpp"
#include "fierg/io.hpp"
#include "fierg/scenario.hpp"

namespace fierg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kThreadsEnv = "FIERGM_THREADS";

std::string find_config_path(int argc, const char* const* argv) {
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--config" && a + 1 < argc) return argv[a + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

int env_threads() {
  const char* v = std::getenv(kThreadsEnv);
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError(std::string(kThreadsEnv) + " must be a positive integer");
  return static_cast<int>(n);
}

void progress_line(std::ostream& err, const std::string& stage, const ChainProgress& p) {
  err << json{{"event", "progress"},
              {"stage", stage},
              {"iteration", p.iteration},
              {"iterations", p.iterations},
              {"elapsed_seconds", p.elapsed_seconds},
              {"mean_acceptance", p.mean_acceptance}}
             .dump()
      << std::endl;
}

void event_line(std::ostream& err, json j) { err << j.dump() << std::endl; }

// Fills in default basis settings for T time points and validates them.
void resolve_basis(RunConfig& cfg, int T) {
  const int k_n = cfg.basis.k_n.value_or(default_kn(T));
  if (k_n > T) throw ConfigError("--kn " + std::to_string(k_n) + " exceeds the number of time points " + std::to_string(T));
  cfg.basis.k_n = k_n;
  cfg.basis.degree = cfg.basis.degree.value_or(default_degree(k_n));
}

BasisMatrix make_basis(const RunConfig& cfg, const ResponseTensor& x) {
  RunConfig resolved = cfg;
  resolve_basis(resolved, x.T());
  const auto times = x.times();
  return build_bspline(x.T(), times, *resolved.basis.k_n, *resolved.basis.degree);
}

ChainOutput fit_tensor(const RunConfig& cfg, const ResponseTensor& x, std::ostream& err, const std::string& stage) {
  const BasisMatrix phi = make_basis(cfg, x);
  ChainConfig chain = cfg.chain;
  chain.validate();
  if (chain.progress_every == 0) chain.progress_every = std::max(1, chain.iterations / 100);
  chain.on_progress = [&err, &stage](const ChainProgress& p) { progress_line(err, stage, p); };
  return run_chain(x, phi, chain);
}

std::vector<int> parse_multipliers(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid multiplier '" + item + "' in --multipliers");
    }
  }
  if (out.empty()) throw ConfigError("--multipliers is empty");
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct Options {
  std::string beta_update;
  std::string grid;
  std::string multipliers;
  std::optional<int> k_n;
  std::optional<int> degree;
};

void add_chain_options(CLI::App* cmd, RunConfig& cfg, Options& opt) {
  cmd->add_option("--iterations", cfg.chain.iterations, "Total MCMC iterations");
  cmd->add_option("--burnin", cfg.chain.burnin, "Burn-in iterations");
  cmd->add_option("--thin", cfg.chain.thin, "Keep every k-th post-burn-in draw");
  cmd->add_option("--inner-multiplier", cfg.chain.inner.step_multiplier, "Inner Gibbs steps per DMH proposal, in multiples of n");
  cmd->add_option("--kn", opt.k_n, "Number of B-spline basis functions");
  cmd->add_option("--degree", opt.degree, "B-spline degree");
  cmd->add_option("--proposal-sd", cfg.chain.proposal.sd, "Initial random-walk proposal sd");
  cmd->add_option("--beta-update", opt.beta_update, "beta/sigma2 conditional form")
      ->check(CLI::IsMember({"model", "verbatim"}));
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--threads", cfg.chain.workers, "Worker threads (default $" + std::string(kThreadsEnv) + " or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.chain.seed, "Random seed");
  cmd->add_option("--format", cfg.format, "Tensor format")->check(CLI::IsMember({"long", "dense"}));
  cmd->add_option("-o,--output", cfg.output, "Output directory");
  cmd->add_option("--config", config_path, "JSON run configuration (flags override it)");
}

void add_scenario_options(CLI::App* cmd, RunConfig& cfg, Options& opt) {
  cmd->add_option("--sigma2", cfg.scenario.sigma2, "Perturbation variance of the true trajectories");
  cmd->add_option("--n", cfg.scenario.n, "Respondents");
  cmd->add_option("--p", cfg.scenario.p, "Items");
  cmd->add_option("--T", cfg.scenario.T, "Time points");
  cmd->add_option("--grid", opt.grid, "Trend argument")->check(CLI::IsMember({"integer", "unit"}));
  cmd->add_option("--burn-multiplier", cfg.scenario.burn_multiplier, "Gibbs steps per slice, in multiples of n");
}

void finish_options(RunConfig& cfg, const Options& opt) {
  if (!opt.beta_update.empty()) {
    cfg.chain.fhs.beta_update_mode = parse_update_mode(opt.beta_update);
    cfg.chain.fhs.sigma2_update_mode = cfg.chain.fhs.beta_update_mode;
  }
  if (!opt.grid.empty()) cfg.scenario.grid = parse_time_grid(opt.grid);
  if (!opt.multipliers.empty()) cfg.bench_multipliers = parse_multipliers(opt.multipliers);
  if (opt.k_n) cfg.basis.k_n = opt.k_n;
  if (opt.degree) cfg.basis.degree = opt.degree;
  cfg.ppc.workers = cfg.chain.workers;
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  fs::create_directories(dir);
  return dir;
}

int cmd_simulate(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.scenario.validate();
  const fs::path dir = output_dir(cfg);
  const Scenario sc = generate_scenario(cfg.scenario);
  save_scenario_bundle(dir, sc);
  if (cfg.format == "dense") save_tensor(dir / "tensor_dense.csv", sc.data, TensorFormat::Dense);
  write_manifest(dir / "manifest.json", cfg);
  event_line(err, {{"event", "done"}, {"command", "simulate"}, {"output", dir.string()}});
  out << "wrote scenario bundle to " << dir.string() << " (T=" << sc.data.T() << ", n=" << sc.data.n()
      << ", p=" << sc.data.p() << ", zero=" << sc.truth.zero_set.size() << ")\n";
  return 0;
}

int cmd_fit(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedTensor loaded = load_tensor(cfg.input, parse_tensor_format(cfg.format));
  resolve_basis(cfg, loaded.tensor.T());
  cfg.chain.validate();
  (void)make_basis(cfg, loaded.tensor);
  const fs::path dir = output_dir(cfg);
  write_manifest(dir / "manifest.json", cfg);
  const ChainOutput chain = fit_tensor(cfg, loaded.tensor, err, "fit");
  save_chain(dir / "chain.txt", chain);
  save_estimates_csv(dir / "estimates.csv", chain.posterior_mean(), chain.index(), loaded.tensor.times());
  event_line(err, {{"event", "done"}, {"command", "fit"}, {"wall_seconds", chain.wall_seconds}});
  out << "wrote chain (" << chain.draws << " draws, " << fixed(chain.wall_seconds, 1) << " s) to "
      << (dir / "chain.txt").string() << '\n';
  return 0;
}

int cmd_ppc(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedTensor loaded = load_tensor(cfg.input, parse_tensor_format(cfg.format));
  const ChainOutput chain = load_chain(cfg.chain_path);
  const fs::path dir = output_dir(cfg);
  write_manifest(dir / "manifest.json", cfg);
  const PpcReport rep = ppc_summary(loaded.tensor, chain, cfg.ppc);
  {
    std::ofstream f(dir / "ppc_summary.csv");
    write_ppc_summary_csv(f, rep, chain.index());
  }
  {
    std::ofstream f(dir / "ppc_degree.csv");
    write_ppc_degree_csv(f, rep);
  }
  event_line(err, {{"event", "done"}, {"command", "ppc"}});
  out << "replicates " << rep.replicates << '\n'
      << "summary_correlation " << fixed(rep.summary_correlation(), 4) << '\n'
      << "summary_slope " << fixed(rep.summary_slope(), 4) << '\n'
      << "degree_correlation " << fixed(rep.degree_correlation(), 4) << '\n'
      << "degree_slope " << fixed(rep.degree_slope(), 4) << '\n';
  return 0;
}

int cmd_report(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ChainOutput chain = load_chain(cfg.chain_path);
  const fs::path dir = output_dir(cfg);
  write_manifest(dir / "manifest.json", cfg);
  const ShrinkageReport shrink = diagnose_shrinkage(chain);
  {
    std::ofstream f(dir / "shrinkage.csv");
    write_shrinkage_csv(f, shrink);
  }
  std::vector<double> times(static_cast<std::size_t>(chain.T));
  for (int t = 0; t < chain.T; ++t) times[t] = t + 1;
  save_estimates_csv(dir / "estimates.csv", chain.posterior_mean(), chain.index(), times);
  const McseSummary m = chain_mcse(chain);
  const AcceptanceReport acc = acceptance_report(chain);
  event_line(err, {{"event", "done"}, {"command", "report"}});
  out << "zero_functions " << shrink.zero_count << '\n'
      << "nonzero_functions " << shrink.nonzero_count << '\n'
      << "mcse_max " << fixed(m.max, 4) << '\n'
      << "mcse_mean " << fixed(m.mean, 4) << '\n'
      << "acceptance_inside_0.1_0.7 " << fixed(acc.fraction_inside(), 4) << '\n';
  return 0;
}

void print_score_header(std::ostream& out, const std::string& first) { out << first << ",mse,tp,tn\n"; }

std::string score_row(const ScenarioScore& s) { return fixed(s.mse, 4) + ',' + fixed(s.tp, 4) + ',' + fixed(s.tn, 4); }

ScenarioScore score_chain(const ChainOutput& chain, const ScenarioTruth& truth) {
  return score_scenario(chain.posterior_mean(), truth.theta, truth.zero_set, diagnose_shrinkage(chain));
}

int cmd_score(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ChainOutput chain = load_chain(cfg.chain_path);
  const ScenarioTruth truth = load_truth_bundle(cfg.truth_dir);
  const ScenarioScore s = score_chain(chain, truth);
  event_line(err, {{"event", "done"}, {"command", "score"}});
  print_score_header(out, "chain");
  out << cfg.chain_path << ',' << score_row(s) << '\n';
  return 0;
}

int cmd_bench(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.scenario.validate();
  resolve_basis(cfg, cfg.scenario.T);
  cfg.chain.validate();
  const fs::path dir = output_dir(cfg);
  write_manifest(dir / "manifest.json", cfg);
  const Scenario sc = generate_scenario(cfg.scenario);
  std::ofstream table(dir / "bench.csv");
  table << "multiplier,mse,tp,tn,wall_minutes\n";
  out << "multiplier,mse,tp,tn,wall_minutes\n";
  for (int mult : cfg.bench_multipliers) {
    RunConfig run = cfg;
    run.chain.inner.step_multiplier = mult;
    const ChainOutput chain = fit_tensor(run, sc.data, err, "bench x" + std::to_string(mult));
    const ScenarioScore s = score_chain(chain, sc.truth);
    const std::string row = std::to_string(mult) + "n," + score_row(s) + ',' + fixed(chain.wall_seconds / 60.0, 2);
    table << row << '\n';
    out << row << std::endl;
  }
  event_line(err, {{"event", "done"}, {"command", "bench"}});
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  Options opt;

  CLI::App app{"Functional inhomogeneous ERGM for longitudinal item-response data", "fierg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario bundle");
  add_common_options(simulate, cfg, config_path);
  add_scenario_options(simulate, cfg, opt);

  auto* fit = app.add_subcommand("fit", "Run the FHS-DMH chain on a response tensor");
  fit->add_option("tensor", cfg.input, "Response tensor CSV")->required()->check(CLI::ExistingFile);
  add_common_options(fit, cfg, config_path);
  add_chain_options(fit, cfg, opt);

  auto* ppc = app.add_subcommand("ppc", "Posterior predictive checks of a fitted chain");
  ppc->add_option("tensor", cfg.input, "Observed response tensor CSV")->required()->check(CLI::ExistingFile);
  ppc->add_option("--chain", cfg.chain_path, "Chain file")->required()->check(CLI::ExistingFile);
  ppc->add_option("--replicates", cfg.ppc.replicates, "Replicated datasets");
  ppc->add_option("--ppc-burn", cfg.ppc.burn_multiplier, "Gibbs steps per replicate slice, in multiples of n");
  add_common_options(ppc, cfg, config_path);

  auto* report = app.add_subcommand("report", "Shrinkage diagnosis, estimate table and MCSE of a chain");
  report->add_option("--chain", cfg.chain_path, "Chain file")->required()->check(CLI::ExistingFile);
  add_common_options(report, cfg, config_path);

  auto* score = app.add_subcommand("score", "Score a chain against a scenario truth bundle");
  score->add_option("--chain", cfg.chain_path, "Chain file")->required()->check(CLI::ExistingFile);
  score->add_option("--truth", cfg.truth_dir, "Scenario bundle directory")->required()->check(CLI::ExistingDirectory);
  add_common_options(score, cfg, config_path);

  auto* bench = app.add_subcommand("bench", "Inner-sampler length sweep on one scenario");
  bench->add_option("--multipliers", opt.multipliers, "Comma-separated inner multipliers, e.g. 1,2,4,8");
  add_common_options(bench, cfg, config_path);
  add_chain_options(bench, cfg, opt);
  add_scenario_options(bench, cfg, opt);

  try {
    // Defaults < environment < config file < flags.
    if (const int threads = env_threads(); threads > 0) cfg.chain.workers = threads;
    if (const std::string path = find_config_path(argc, argv); !path.empty()) {
      cfg = load_run_config(path);
      if (cfg.basis.k_n) opt.k_n = cfg.basis.k_n;
      if (cfg.basis.degree) opt.degree = cfg.basis.degree;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    finish_options(cfg, opt);
    // One seed drives every stream of a run.
    cfg.scenario.seed = cfg.chain.seed;
    cfg.ppc.seed = cfg.chain.seed;
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub == simulate) return cmd_simulate(cfg, out, err);
    if (sub == fit) return cmd_fit(cfg, out, err);
    if (sub == ppc) return cmd_ppc(cfg, out, err);
    if (sub == report) return cmd_report(cfg, out, err);
    if (sub == score) return cmd_score(cfg, out, err);
    return cmd_bench(cfg, out, err);
  } catch (const std::exception& e) {
    err << json{{"event", "error"}, {"message", e.what()}}.dump() << '\n';
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fierg
