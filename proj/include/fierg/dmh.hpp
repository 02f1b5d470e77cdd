#pragma once

// FHS-DMH chain: per-(t,i) double Metropolis-Hastings updates of theta with
// auxiliary response simulation, then per-i functional horseshoe updates.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fierg/basis.hpp"
#include "fierg/fhs.hpp"
#include "fierg/model.hpp"
#include "fierg/rng.hpp"
#include "fierg/sampler.hpp"

namespace fierg {

enum class ProposalCenter {
  Current,    // theta' ~ N(theta_ti, sd^2)
  PriorMean,  // theta' ~ N((Phi beta_i)_t, sd^2), with Hastings correction
};

struct ProposalConfig {
  ProposalCenter center = ProposalCenter::Current;
  double sd = 0.1;
  // Robbins-Monro tuning of each (t,i) proposal sd during burn-in only.
  bool adapt = true;
  double target_acceptance = 0.3;

  void validate() const;
};

struct ChainProgress {
  int iteration;
  int iterations;
  double elapsed_seconds;
  double mean_acceptance;  // over the last reporting window
};

struct ChainConfig {
  int iterations = 10000;
  int burnin = 5000;
  int thin = 5;
  InnerSamplerConfig inner;  // rng_seed is ignored; streams derive from seed
  int workers = 1;
  std::uint64_t seed = 1;
  ProposalConfig proposal;
  FhsConfig fhs;

  int progress_every = 0;  // 0 disables progress callbacks
  std::function<void(const ChainProgress&)> on_progress;

  void validate() const;
  // floor((iterations - burnin) / thin)
  int sample_count() const { return (iterations - burnin) / thin; }
};

struct ChainOutput {
  int T = 0;
  int p = 0;
  int q = 0;
  int k_n = 0;
  int draws = 0;

  int iterations = 0;
  int burnin = 0;
  int thin = 1;
  int workers = 1;
  int inner_multiplier = 2;
  std::uint64_t seed = 0;

  std::vector<double> theta;   // draws x T x q
  std::vector<double> omega;   // draws x q
  std::vector<double> tau;     // draws x q
  std::vector<double> sigma2;  // draws x q
  std::vector<double> beta;    // draws x q x k_n

  std::vector<std::int64_t> accepted;   // T x q, post-burnin
  std::vector<std::int64_t> attempted;  // T x q, post-burnin
  std::vector<double> proposal_sd;      // T x q, as frozen after burn-in
  std::int64_t nonfinite_rejections = 0;
  double wall_seconds = 0.0;

  ParamIndex index() const { return ParamIndex(p); }
  double theta_at(int d, int t, int i) const {
    return theta[(static_cast<std::size_t>(d) * T + t) * q + i];
  }
  ParamState draw(int d) const;
  std::vector<double> theta_trace(int t, int i) const;
  std::vector<double> omega_trace(int i) const;
  std::vector<double> sigma2_trace(int i) const;
  std::vector<double> tau_trace(int i) const;
  double acceptance_rate(int t, int i) const;
  // Posterior mean of theta over all recorded draws (T x q).
  RowMatrix posterior_mean() const;

  // Field-by-field equality, ignoring wall-clock time.
  bool same_samples(const ChainOutput& other) const;
};

// Estimate of log f(x_t | theta') - log f(x_t | theta) where theta' is theta_t
// with coordinate i replaced by `proposed`. One instance per time point.
class LikelihoodRatio {
 public:
  virtual ~LikelihoodRatio() = default;
  virtual double log_ratio(int i, std::span<const double> theta_t, double proposed, Rng& rng) = 0;
};

using LikelihoodRatioFactory = std::function<std::unique_ptr<LikelihoodRatio>(int t)>;

// Double Metropolis-Hastings ratio: simulates an auxiliary slice y_t at the
// proposed parameters (starting from x_t) and returns
//   [L(x;theta') - L(x;theta)] + [L(y;theta) - L(y;theta')]
// from unnormalized log-likelihoods only.
class DmhLikelihoodRatio final : public LikelihoodRatio {
 public:
  DmhLikelihoodRatio(const ResponseSlice& x_t, int inner_multiplier,
                     UpdateRule rule = UpdateRule::RandomScanEntry);

  double log_ratio(int i, std::span<const double> theta_t, double proposed, Rng& rng) override;

  const ResponseSlice& auxiliary() const { return y_; }
  const SuffStats& auxiliary_stats() const { return y_stats_; }
  const SuffStats& observed_stats() const { return x_stats_; }

 private:
  const ResponseSlice& x_;
  SuffStats x_stats_;
  int multiplier_;
  UpdateRule rule_;
  ResponseSlice y_;
  SuffStats y_stats_;
  std::vector<double> proposed_row_;
};

// Log DMH acceptance for coordinate i given observed and auxiliary statistics,
// including the N(prior_mean, prior_var) prior ratio for that coordinate.
double dmh_log_acceptance(const SuffStats& x_stats, const SuffStats& y_stats, std::span<const double> theta_t, int i,
                          double proposed, double prior_mean, double prior_var);

struct CoordinatePrior {
  double mean;      // (Phi beta_i)_t
  double variance;  // sigma2_i
};

struct DmhStep {
  double proposed = 0.0;
  double log_alpha = 0.0;
  bool accepted = false;
  bool nonfinite = false;
};

// One Metropolis-Hastings update of theta_t[i] with the given likelihood-ratio
// kernel; theta_t[i] is overwritten when the proposal is accepted.
DmhStep coordinate_update(int i, std::span<double> theta_t, CoordinatePrior prior, ProposalCenter center,
                          double proposal_sd, LikelihoodRatio& kernel, Rng& rng);

// Convenience form of a single DMH update with a fresh auxiliary simulation.
DmhStep dmh_update(int i, std::span<double> theta_t, const ResponseSlice& x_t, CoordinatePrior prior,
                   const ChainConfig& cfg, Rng& rng);

ChainOutput run_chain(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg);

// Same sweep structure with an arbitrary likelihood-ratio kernel.
ChainOutput run_chain_with_kernel(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg,
                                  const LikelihoodRatioFactory& factory);

struct AcceptanceReport {
  RowMatrix rates;  // T x q
  double low = 0.1;
  double high = 0.7;
  std::vector<std::pair<int, int>> flagged;  // (t, i) with rate outside [low, high]
  double fraction_inside() const;
};

AcceptanceReport acceptance_report(const ChainOutput& out, double low = 0.1, double high = 0.7);

}  // namespace fierg
