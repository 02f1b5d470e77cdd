#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "fierg/dmh.hpp"
#include "fierg/errors.hpp"
#include "fierg/exact.hpp"
#include "fierg/exact_chain.hpp"

using namespace fierg;

namespace {

// Gaussian pseudo-likelihood in coordinate i: log f = -(theta_i - c)^2 / (2 s2).
class GaussianKernel : public LikelihoodRatio {
 public:
  GaussianKernel(double c, double s2) : c_(c), s2_(s2) {}
  double log_ratio(int i, std::span<const double> theta_t, double proposed, Rng&) override {
    const double cur = theta_t[i];
    return (-(proposed - c_) * (proposed - c_) + (cur - c_) * (cur - c_)) / (2 * s2_);
  }

 private:
  double c_;
  double s2_;
};

ResponseTensor small_data(int T, int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ResponseSlice> slices;
  for (int t = 0; t < T; ++t) {
    std::vector<std::uint8_t> cells(n * p);
    for (auto& c : cells) c = (rng() % 3 == 0) ? 1 : 0;
    slices.emplace_back(n, p, cells);
  }
  return ResponseTensor(slices);
}

ChainConfig small_chain(int iterations) {
  ChainConfig cfg;
  cfg.iterations = iterations;
  cfg.burnin = iterations / 2;
  cfg.thin = 2;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("DMH acceptance is built from unnormalized terms only") {
  const SuffStats x{{3, 5, 2}, {1, 0, 2}};
  const SuffStats y{{4, 2, 2}, {2, 1, 0}};
  const std::vector<double> theta{0.1, -0.3, 0.4, 0.2, -0.5, 0.6};
  const int i = 4;
  const double prop = 0.25;
  std::vector<double> th2 = theta;
  th2[i] = prop;
  const double prior = (-(prop - 0.1) * (prop - 0.1) + (theta[i] - 0.1) * (theta[i] - 0.1)) / (2 * 0.3);
  const double expect = log_unnorm_lik(x, th2) - log_unnorm_lik(x, theta) + log_unnorm_lik(y, theta) -
                        log_unnorm_lik(y, th2) + prior;
  CHECK(dmh_log_acceptance(x, y, theta, i, prop, 0.1, 0.3) == doctest::Approx(expect));
  // Auxiliary data equal to the observed data leaves only the prior ratio.
  CHECK(dmh_log_acceptance(x, x, theta, i, prop, 0.1, 0.3) == doctest::Approx(prior));
  // A degenerate proposal is always accepted.
  CHECK(dmh_log_acceptance(x, y, theta, i, theta[i], 0.1, 0.3) == 0.0);
}

TEST_CASE("likelihood-ratio kernel simulates from the observed slice") {
  const ResponseTensor data = small_data(1, 30, 4, 1);
  const ResponseSlice& x = data.slice(0);
  DmhLikelihoodRatio kernel(x, 2);
  CHECK(kernel.observed_stats() == compute_suff_stats(x));
  const std::vector<double> theta{-0.5, 0.2, 0.1, -0.3, 0.4, 0.0, -0.2, 0.3, 0.1, 0.2};
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const double prop = theta[i] + 0.3;
    const double r = kernel.log_ratio(i, theta, prop, rng);
    CHECK(kernel.auxiliary_stats() == compute_suff_stats(kernel.auxiliary()));
    std::vector<double> th2 = theta;
    th2[i] = prop;
    const SuffStats& xs = kernel.observed_stats();
    const SuffStats& ys = kernel.auxiliary_stats();
    CHECK(r == doctest::Approx(log_unnorm_lik(xs, th2) - log_unnorm_lik(xs, theta) + log_unnorm_lik(ys, theta) -
                               log_unnorm_lik(ys, th2)));
    CHECK(kernel.log_ratio(i, theta, theta[i], rng) == 0.0);
  }
}

TEST_CASE("coordinate update samples the posterior of a Gaussian toy model") {
  // Likelihood N(c, s2) times prior N(m, v): posterior is Gaussian.
  const double c = 1.0, s2 = 0.5, m = -0.5, v = 2.0;
  const double post_var = 1.0 / (1.0 / s2 + 1.0 / v);
  const double post_mean = post_var * (c / s2 + m / v);
  for (auto center : {ProposalCenter::Current, ProposalCenter::PriorMean}) {
    GaussianKernel kernel(c, s2);
    Rng rng(center == ProposalCenter::Current ? 1 : 2);
    std::vector<double> theta{0.0};
    std::vector<double> draws;
    for (int s = 0; s < 400000; ++s) {
      coordinate_update(0, theta, {m, v}, center, 1.2, kernel, rng);
      draws.push_back(theta[0]);
    }
    CHECK(oracle::mean(draws) == doctest::Approx(post_mean).epsilon(0.02));
    CHECK(oracle::variance(draws) == doctest::Approx(post_var).epsilon(0.03));
  }
}

TEST_CASE("chain output layout and bookkeeping") {
  const ResponseTensor data = small_data(3, 20, 3, 2);
  const BasisMatrix phi = build_bspline(3, {}, 2, 1);
  ChainConfig cfg = small_chain(60);
  int callbacks = 0;
  cfg.progress_every = 20;
  cfg.on_progress = [&](const ChainProgress& pr) {
    ++callbacks;
    CHECK(pr.iterations == 60);
  };
  const ChainOutput out = run_chain(data, phi, cfg);
  CHECK(callbacks == 3);
  CHECK(out.draws == cfg.sample_count());
  CHECK(out.draws == 15);
  CHECK(out.theta.size() == static_cast<std::size_t>(15 * 3 * 6));
  CHECK(out.omega.size() == 15 * 6u);
  CHECK(out.beta.size() == 15 * 6 * 2u);
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < 6; ++i) {
      const double r = out.acceptance_rate(t, i);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
  for (double w : out.omega) CHECK((w >= 0.0 && w <= 1.0));
  for (double s : out.sigma2) CHECK(s > 0.0);
  const RowMatrix pm = out.posterior_mean();
  double manual = 0;
  for (int d = 0; d < out.draws; ++d) manual += out.theta_at(d, 2, 4);
  CHECK(pm(2, 4) == doctest::Approx(manual / out.draws));
  CHECK(out.draw(3).matrix()(1, 2) == out.theta_at(3, 1, 2));
  CHECK_THROWS_AS(out.draw(15), InvalidInput);

  const AcceptanceReport rep = acceptance_report(out);
  CHECK(rep.rates.rows() == 3);
  CHECK(rep.fraction_inside() >= 0.0);
}

TEST_CASE("chains are reproducible and independent of the worker count") {
  const ResponseTensor data = small_data(4, 15, 3, 3);
  const BasisMatrix phi = build_bspline(4, {}, 2, 1);
  ChainConfig cfg = small_chain(40);
  const ChainOutput a = run_chain(data, phi, cfg);
  const ChainOutput b = run_chain(data, phi, cfg);
  CHECK(a.same_samples(b));
  cfg.workers = 3;
  const ChainOutput c = run_chain(data, phi, cfg);
  CHECK(a.theta == c.theta);
  cfg.seed = 100;
  CHECK_FALSE(a.same_samples(run_chain(data, phi, cfg)));
}

TEST_CASE("the DMH chain never evaluates a normalizer") {
  const ResponseTensor data = small_data(3, 20, 3, 4);
  const BasisMatrix phi = build_bspline(3, {}, 2, 1);
  const auto before = normalizer_call_count();
  run_chain(data, phi, small_chain(30));
  CHECK(normalizer_call_count() == before);
}

TEST_CASE("invalid chain settings are rejected before sampling") {
  const ResponseTensor data = small_data(3, 10, 2, 5);
  const BasisMatrix phi = build_bspline(3, {}, 2, 1);
  ChainConfig cfg = small_chain(10);
  cfg.burnin = 10;
  CHECK_THROWS_AS(run_chain(data, phi, cfg), ConfigError);
  cfg = small_chain(10);
  cfg.thin = 0;
  CHECK_THROWS_AS(run_chain(data, phi, cfg), ConfigError);
  cfg = small_chain(10);
  cfg.proposal.sd = 0;
  CHECK_THROWS_AS(run_chain(data, phi, cfg), ConfigError);
  CHECK_THROWS_AS(run_chain(data, build_bspline(4, {}, 2, 1), small_chain(10)), ConfigError);
}

TEST_CASE("exact likelihood ratio matches full enumeration") {
  const ResponseTensor data = small_data(1, 3, 3, 6);
  const ResponseSlice& x = data.slice(0);
  std::vector<int> plain(x.cells().begin(), x.cells().end());
  ExactLikelihoodRatio kernel(x);
  const std::vector<double> theta{-0.2, 0.4, 0.1, 0.7, -0.3, 0.2};
  Rng rng(1);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> next = theta;
    next[i] -= 0.45;
    const double expect = oracle::unnorm_log_lik(plain, 3, 3, next) - oracle::log_normalizer_full(next, 3, 3) -
                          oracle::unnorm_log_lik(plain, 3, 3, theta) + oracle::log_normalizer_full(theta, 3, 3);
    CHECK(kernel.log_ratio(i, theta, next[i], rng) == doctest::Approx(expect).epsilon(1e-10));
  }
}
