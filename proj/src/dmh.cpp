#include "fierg/dmh.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fierg/errors.hpp"
#include "fierg/parallel.hpp"

namespace fierg {

void ProposalConfig::validate() const {
  if (!(sd > 0) || !std::isfinite(sd)) throw ConfigError("proposal sd must be positive");
  if (!(target_acceptance > 0 && target_acceptance < 1)) throw ConfigError("target acceptance must be in (0,1)");
}

void ChainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be positive");
  if (burnin < 0 || burnin >= iterations) throw ConfigError("burn-in must satisfy 0 <= burnin < iterations");
  if (thin < 1) throw ConfigError("thin must be at least 1");
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  inner.validate();
  proposal.validate();
  fhs.validate();
}

ParamState ChainOutput::draw(int d) const {
  if (d < 0 || d >= draws) throw InvalidInput("draw index out of range");
  RowMatrix m(T, q);
  std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(d) * T * q, static_cast<std::size_t>(T) * q, m.data());
  return ParamState(index(), std::move(m));
}

std::vector<double> ChainOutput::theta_trace(int t, int i) const {
  std::vector<double> out(draws);
  for (int d = 0; d < draws; ++d) out[d] = theta_at(d, t, i);
  return out;
}

namespace {
std::vector<double> column_trace(const std::vector<double>& data, int draws, int q, int i) {
  std::vector<double> out(draws);
  for (int d = 0; d < draws; ++d) out[d] = data[static_cast<std::size_t>(d) * q + i];
  return out;
}
}  // namespace

std::vector<double> ChainOutput::omega_trace(int i) const { return column_trace(omega, draws, q, i); }
std::vector<double> ChainOutput::sigma2_trace(int i) const { return column_trace(sigma2, draws, q, i); }
std::vector<double> ChainOutput::tau_trace(int i) const { return column_trace(tau, draws, q, i); }

double ChainOutput::acceptance_rate(int t, int i) const {
  const auto k = static_cast<std::size_t>(t) * q + i;
  return attempted[k] == 0 ? 0.0 : static_cast<double>(accepted[k]) / static_cast<double>(attempted[k]);
}

RowMatrix ChainOutput::posterior_mean() const {
  if (draws == 0) throw InvalidInput("chain has no recorded draws");
  RowMatrix mean = RowMatrix::Zero(T, q);
  for (int d = 0; d < draws; ++d) {
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < q; ++i) mean(t, i) += theta_at(d, t, i);
  }
  return mean / static_cast<double>(draws);
}

bool ChainOutput::same_samples(const ChainOutput& o) const {
  return T == o.T && p == o.p && q == o.q && k_n == o.k_n && draws == o.draws && iterations == o.iterations &&
         burnin == o.burnin && thin == o.thin && workers == o.workers && inner_multiplier == o.inner_multiplier &&
         seed == o.seed && theta == o.theta && omega == o.omega && tau == o.tau && sigma2 == o.sigma2 &&
         beta == o.beta && accepted == o.accepted && attempted == o.attempted && proposal_sd == o.proposal_sd &&
         nonfinite_rejections == o.nonfinite_rejections;
}

DmhLikelihoodRatio::DmhLikelihoodRatio(const ResponseSlice& x_t, int inner_multiplier, UpdateRule rule)
    : x_(x_t),
      x_stats_(compute_suff_stats(x_t)),
      multiplier_(inner_multiplier),
      rule_(rule),
      y_(x_t),
      y_stats_(x_stats_) {
  if (inner_multiplier < 1) throw ConfigError("inner step multiplier must be at least 1");
}

double DmhLikelihoodRatio::log_ratio(int i, std::span<const double> theta_t, double proposed, Rng& rng) {
  proposed_row_.assign(theta_t.begin(), theta_t.end());
  proposed_row_[i] = proposed;
  // Auxiliary slice y_t ~ f(. | theta'), started from the observed slice.
  const SliceGibbs gibbs(proposed_row_, x_.p());
  std::copy(x_.cells().begin(), x_.cells().end(), y_.cells().begin());
  y_stats_ = x_stats_;
  gibbs.run(y_, static_cast<std::int64_t>(multiplier_) * x_.n(), rng, &y_stats_, rule_);
  return (log_unnorm_lik(x_stats_, proposed_row_) - log_unnorm_lik(x_stats_, theta_t)) +
         (log_unnorm_lik(y_stats_, theta_t) - log_unnorm_lik(y_stats_, proposed_row_));
}

namespace {
double log_normal_kernel(double v, double mean, double var) {
  const double d = v - mean;
  return -d * d / (2.0 * var);
}
}  // namespace

double dmh_log_acceptance(const SuffStats& x_stats, const SuffStats& y_stats, std::span<const double> theta_t, int i,
                          double proposed, double prior_mean, double prior_var) {
  std::vector<double> row(theta_t.begin(), theta_t.end());
  row[i] = proposed;
  return (log_unnorm_lik(x_stats, row) - log_unnorm_lik(x_stats, theta_t)) +
         (log_unnorm_lik(y_stats, theta_t) - log_unnorm_lik(y_stats, row)) +
         log_normal_kernel(proposed, prior_mean, prior_var) - log_normal_kernel(theta_t[i], prior_mean, prior_var);
}

DmhStep coordinate_update(int i, std::span<double> theta_t, CoordinatePrior prior, ProposalCenter center,
                          double proposal_sd, LikelihoodRatio& kernel, Rng& rng) {
  DmhStep step;
  const double current = theta_t[i];
  const double mu = center == ProposalCenter::Current ? current : prior.mean;
  step.proposed = mu + proposal_sd * std_normal(rng);
  if (!std::isfinite(step.proposed)) {
    step.nonfinite = true;
    return step;
  }
  double log_alpha = kernel.log_ratio(i, theta_t, step.proposed, rng) +
                     log_normal_kernel(step.proposed, prior.mean, prior.variance) -
                     log_normal_kernel(current, prior.mean, prior.variance);
  if (center == ProposalCenter::PriorMean) {
    const double s2 = proposal_sd * proposal_sd;
    log_alpha += log_normal_kernel(current, prior.mean, s2) - log_normal_kernel(step.proposed, prior.mean, s2);
  }
  step.log_alpha = std::min(0.0, log_alpha);
  if (std::isnan(log_alpha)) {
    step.nonfinite = true;
    return step;
  }
  if (log_alpha >= 0.0 || std::log(uniform01(rng)) < log_alpha) {
    theta_t[i] = step.proposed;
    step.accepted = true;
  }
  return step;
}

DmhStep dmh_update(int i, std::span<double> theta_t, const ResponseSlice& x_t, CoordinatePrior prior,
                   const ChainConfig& cfg, Rng& rng) {
  DmhLikelihoodRatio kernel(x_t, cfg.inner.step_multiplier, cfg.inner.update_rule);
  return coordinate_update(i, theta_t, prior, cfg.proposal.center, cfg.proposal.sd, kernel, rng);
}

ChainOutput run_chain(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg) {
  const int multiplier = cfg.inner.step_multiplier;
  const UpdateRule rule = cfg.inner.update_rule;
  return run_chain_with_kernel(x, phi, cfg, [&x, multiplier, rule](int t) -> std::unique_ptr<LikelihoodRatio> {
    return std::make_unique<DmhLikelihoodRatio>(x.slice(t), multiplier, rule);
  });
}

ChainOutput run_chain_with_kernel(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg,
                                  const LikelihoodRatioFactory& factory) {
  cfg.validate();
  if (phi.T() != x.T())
    throw ConfigError("basis has " + std::to_string(phi.T()) + " rows but the data has T = " + std::to_string(x.T()));
  const auto started = std::chrono::steady_clock::now();
  const int T = x.T();
  const ParamIndex index(x.p());
  const int q = index.q();
  const int k_n = phi.k_n();
  const double a = cfg.fhs.a;
  const double b = cfg.fhs.resolved_b(k_n, T);

  InitialState state = init_state(index, T, k_n, cfg.fhs, derive_seed(cfg.seed, {stream::kInit}));
  ParamState& theta = state.theta;
  std::vector<FhsState>& hyper = state.hyper;

  std::vector<std::unique_ptr<LikelihoodRatio>> kernels(T);
  for (int t = 0; t < T; ++t) kernels[t] = factory(t);

  ChainOutput out;
  out.T = T;
  out.p = x.p();
  out.q = q;
  out.k_n = k_n;
  out.draws = cfg.sample_count();
  out.iterations = cfg.iterations;
  out.burnin = cfg.burnin;
  out.thin = cfg.thin;
  out.workers = cfg.workers;
  out.inner_multiplier = cfg.inner.step_multiplier;
  out.seed = cfg.seed;
  const auto D = static_cast<std::size_t>(out.draws);
  out.theta.resize(D * T * q);
  out.omega.resize(D * q);
  out.tau.resize(D * q);
  out.sigma2.resize(D * q);
  out.beta.resize(D * q * k_n);
  out.accepted.assign(static_cast<std::size_t>(T) * q, 0);
  out.attempted.assign(static_cast<std::size_t>(T) * q, 0);

  std::vector<double> log_sd(static_cast<std::size_t>(T) * q, std::log(cfg.proposal.sd));
  std::vector<std::int64_t> nonfinite(T, 0);
  std::vector<std::int64_t> window_accepts(T, 0);
  std::int64_t window_attempts = 0;
  RowMatrix prior_mean(T, q);

  for (int m = 1; m <= cfg.iterations; ++m) {
    const bool sampling = m > cfg.burnin;
    for (int i = 0; i < q; ++i) prior_mean.col(i) = phi.phi() * hyper[i].beta;

    // theta sweep: time points in parallel, coordinates sequentially.
    detail::parallel_for(T, cfg.workers, [&](int t) {
      Rng rng = make_stream(cfg.seed, {stream::kTheta, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)});
      auto row = theta.row(t);
      for (int i = 0; i < q; ++i) {
        const auto k = static_cast<std::size_t>(t) * q + i;
        const CoordinatePrior prior{prior_mean(t, i), hyper[i].sigma2};
        const DmhStep step =
            coordinate_update(i, row, prior, cfg.proposal.center, std::exp(log_sd[k]), *kernels[t], rng);
        if (step.nonfinite) ++nonfinite[t];
        if (step.accepted) ++window_accepts[t];
        if (sampling) {
          ++out.attempted[k];
          if (step.accepted) ++out.accepted[k];
        } else if (cfg.proposal.adapt) {
          const double gain = std::pow(static_cast<double>(m) + 1.0, -0.6);
          const double hit = step.accepted ? 1.0 : 0.0;
          log_sd[k] = std::clamp(log_sd[k] + gain * (hit - cfg.proposal.target_acceptance), std::log(1e-4),
                                 std::log(10.0));
        }
      }
    });
    window_attempts += static_cast<std::int64_t>(T) * q;

    // Hyperparameters: functional indices in parallel.
    detail::parallel_for(q, cfg.workers, [&](int i) {
      Rng rng = make_stream(cfg.seed, {stream::kHyper, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(i)});
      update_hyperparameters(hyper[i], theta.column(i), phi, cfg.fhs, a, b, rng);
    });

    if (sampling && (m - cfg.burnin) % cfg.thin == 0) {
      const auto d = static_cast<std::size_t>((m - cfg.burnin) / cfg.thin - 1);
      std::copy_n(theta.matrix().data(), static_cast<std::size_t>(T) * q, out.theta.begin() + d * T * q);
      for (int i = 0; i < q; ++i) {
        out.omega[d * q + i] = hyper[i].omega();
        out.tau[d * q + i] = hyper[i].tau;
        out.sigma2[d * q + i] = hyper[i].sigma2;
        std::copy_n(hyper[i].beta.data(), k_n, out.beta.begin() + (d * q + i) * k_n);
      }
    }

    if (cfg.on_progress && cfg.progress_every > 0 && (m % cfg.progress_every == 0 || m == cfg.iterations)) {
      std::int64_t acc = 0;
      for (auto& w : window_accepts) {
        acc += w;
        w = 0;
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      cfg.on_progress({m, cfg.iterations, elapsed,
                       window_attempts ? static_cast<double>(acc) / static_cast<double>(window_attempts) : 0.0});
      window_attempts = 0;
    }
  }

  out.proposal_sd.resize(log_sd.size());
  std::transform(log_sd.begin(), log_sd.end(), out.proposal_sd.begin(), [](double v) { return std::exp(v); });
  for (auto v : nonfinite) out.nonfinite_rejections += v;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

double AcceptanceReport::fraction_inside() const {
  const double total = static_cast<double>(rates.size());
  return total == 0 ? 0.0 : 1.0 - static_cast<double>(flagged.size()) / total;
}

AcceptanceReport acceptance_report(const ChainOutput& out, double low, double high) {
  std::int64_t attempts = 0;
  for (auto a : out.attempted) attempts += a;
  if (attempts == 0) throw InvalidInput("acceptance report needs a chain with post-burn-in updates");
  AcceptanceReport report;
  report.low = low;
  report.high = high;
  report.rates.resize(out.T, out.q);
  for (int t = 0; t < out.T; ++t) {
    for (int i = 0; i < out.q; ++i) {
      const double r = out.acceptance_rate(t, i);
      report.rates(t, i) = r;
      if (r < low || r > high) report.flagged.emplace_back(t, i);
    }
  }
  return report;
}

}  // namespace fierg
