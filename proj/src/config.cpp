#include "fierg/config.hpp"

#include <fstream>

#include "fierg/errors.hpp"

namespace fierg {

using nlohmann::json;

std::string to_string(UpdateMode m) { return m == UpdateMode::ModelConsistent ? "model" : "verbatim"; }

UpdateMode parse_update_mode(const std::string& s) {
  if (s == "model") return UpdateMode::ModelConsistent;
  if (s == "verbatim") return UpdateMode::AlgorithmVerbatim;
  throw ConfigError("unknown update mode '" + s + "' (expected model or verbatim)");
}

std::string to_string(TimeGrid g) { return g == TimeGrid::Integer ? "integer" : "unit"; }

TimeGrid parse_time_grid(const std::string& s) {
  if (s == "integer") return TimeGrid::Integer;
  if (s == "unit") return TimeGrid::Unit;
  throw ConfigError("unknown time grid '" + s + "' (expected integer or unit)");
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = j.at(key).get<T>();
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const RunConfig& c) {
  const auto& ch = c.chain;
  const auto& f = ch.fhs;
  const auto& s = c.scenario;
  return json{
      {"command", c.command},
      {"chain",
       {{"iterations", ch.iterations},
        {"burnin", ch.burnin},
        {"thin", ch.thin},
        {"inner_multiplier", ch.inner.step_multiplier},
        {"workers", ch.workers},
        {"seed", ch.seed},
        {"proposal",
         {{"center", ch.proposal.center == ProposalCenter::Current ? "current" : "prior-mean"},
          {"sd", ch.proposal.sd},
          {"adapt", ch.proposal.adapt},
          {"target_acceptance", ch.proposal.target_acceptance}}},
        {"fhs",
         {{"a", f.a},
          {"b", opt(f.b)},
          {"ig_shape", f.ig_shape},
          {"ig_rate", f.ig_rate},
          {"beta_update", to_string(f.beta_update_mode)},
          {"sigma2_update", to_string(f.sigma2_update_mode)},
          {"collapsed_eta", f.collapsed_eta},
          {"theta_init_halfwidth", f.theta_init_halfwidth},
          {"beta_init_sd", f.beta_init_sd},
          {"tau_init_sd", f.tau_init_sd},
          {"sigma2_init", f.sigma2_init}}}}},
      {"scenario",
       {{"n", s.n},
        {"p", s.p},
        {"T", s.T},
        {"sigma2", s.sigma2},
        {"grid", to_string(s.grid)},
        {"easiness_level", s.easiness_level},
        {"negative_level", s.negative_level},
        {"positive_level", s.positive_level},
        {"zero_count", opt(s.zero_count)},
        {"negative_count", opt(s.negative_count)},
        {"positive_count", opt(s.positive_count)},
        {"seed", s.seed},
        {"burn_multiplier", s.burn_multiplier}}},
      {"basis", {{"k_n", opt(c.basis.k_n)}, {"degree", opt(c.basis.degree)}}},
      {"ppc",
       {{"replicates", c.ppc.replicates},
        {"burn_multiplier", c.ppc.burn_multiplier},
        {"seed", c.ppc.seed},
        {"workers", c.ppc.workers}}},
      {"format", c.format},
      {"bench_multipliers", c.bench_multipliers},
      {"input", c.input},
      {"output", c.output},
      {"chain_path", c.chain_path},
      {"truth_dir", c.truth_dir},
  };
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    read(j, "command", c.command);
    if (j.contains("chain")) {
      const json& ch = j.at("chain");
      read(ch, "iterations", c.chain.iterations);
      read(ch, "burnin", c.chain.burnin);
      read(ch, "thin", c.chain.thin);
      read(ch, "inner_multiplier", c.chain.inner.step_multiplier);
      read(ch, "workers", c.chain.workers);
      read(ch, "seed", c.chain.seed);
      if (ch.contains("proposal")) {
        const json& p = ch.at("proposal");
        if (p.contains("center")) {
          const auto center = p.at("center").get<std::string>();
          if (center == "current") {
            c.chain.proposal.center = ProposalCenter::Current;
          } else if (center == "prior-mean") {
            c.chain.proposal.center = ProposalCenter::PriorMean;
          } else {
            throw ConfigError("unknown proposal center '" + center + "'");
          }
        }
        read(p, "sd", c.chain.proposal.sd);
        read(p, "adapt", c.chain.proposal.adapt);
        read(p, "target_acceptance", c.chain.proposal.target_acceptance);
      }
      if (ch.contains("fhs")) {
        const json& f = ch.at("fhs");
        auto& fc = c.chain.fhs;
        read(f, "a", fc.a);
        read_opt(f, "b", fc.b);
        read(f, "ig_shape", fc.ig_shape);
        read(f, "ig_rate", fc.ig_rate);
        if (f.contains("beta_update")) fc.beta_update_mode = parse_update_mode(f.at("beta_update").get<std::string>());
        if (f.contains("sigma2_update"))
          fc.sigma2_update_mode = parse_update_mode(f.at("sigma2_update").get<std::string>());
        read(f, "collapsed_eta", fc.collapsed_eta);
        read(f, "theta_init_halfwidth", fc.theta_init_halfwidth);
        read(f, "beta_init_sd", fc.beta_init_sd);
        read(f, "tau_init_sd", fc.tau_init_sd);
        read(f, "sigma2_init", fc.sigma2_init);
      }
    }
    if (j.contains("scenario")) {
      const json& s = j.at("scenario");
      auto& sc = c.scenario;
      read(s, "n", sc.n);
      read(s, "p", sc.p);
      read(s, "T", sc.T);
      read(s, "sigma2", sc.sigma2);
      if (s.contains("grid")) sc.grid = parse_time_grid(s.at("grid").get<std::string>());
      read(s, "easiness_level", sc.easiness_level);
      read(s, "negative_level", sc.negative_level);
      read(s, "positive_level", sc.positive_level);
      read_opt(s, "zero_count", sc.zero_count);
      read_opt(s, "negative_count", sc.negative_count);
      read_opt(s, "positive_count", sc.positive_count);
      read(s, "seed", sc.seed);
      read(s, "burn_multiplier", sc.burn_multiplier);
    }
    if (j.contains("basis")) {
      read_opt(j.at("basis"), "k_n", c.basis.k_n);
      read_opt(j.at("basis"), "degree", c.basis.degree);
    }
    if (j.contains("ppc")) {
      const json& p = j.at("ppc");
      read(p, "replicates", c.ppc.replicates);
      read(p, "burn_multiplier", c.ppc.burn_multiplier);
      read(p, "seed", c.ppc.seed);
      read(p, "workers", c.ppc.workers);
    }
    read(j, "format", c.format);
    read(j, "bench_multipliers", c.bench_multipliers);
    read(j, "input", c.input);
    read(j, "output", c.output);
    read(j, "chain_path", c.chain_path);
    read(j, "truth_dir", c.truth_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

json make_manifest(const RunConfig& cfg) {
  return json{{"version", kVersion}, {"command", cfg.command}, {"seed", cfg.chain.seed}, {"config", to_json(cfg)}};
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest '" + path.string() + "'");
  out << make_manifest(cfg).dump(2) << '\n';
}

}  // namespace fierg
