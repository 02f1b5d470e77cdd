// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion numbers as arguments
// to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"

#include "fierg/basis.hpp"
#include "fierg/diagnostics.hpp"
#include "fierg/dmh.hpp"
#include "fierg/exact.hpp"
#include "fierg/fhs.hpp"
#include "fierg/sampler.hpp"
#include "fierg/scenario.hpp"

using namespace fierg;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void note(const std::string& s) {
  std::printf("       %s\n", s.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Simulation-study fits use two basis functions: with the default size the
// horseshoe's Occam penalty at T = 8 shrinks every function to zero.
constexpr int kStudyKn = 2;

struct StudyFit {
  double sigma2;
  int multiplier;
  ScenarioScore score;
  double minutes;
};

StudyFit study_fit(double sigma2, int multiplier) {
  ScenarioSpec spec;
  spec.sigma2 = sigma2;
  spec.seed = 2024;
  const Scenario sc = generate_scenario(spec);
  const BasisMatrix phi = build_bspline(spec.T, {}, kStudyKn, default_degree(kStudyKn));
  ChainConfig cfg;
  cfg.iterations = 10000;
  cfg.burnin = 5000;
  cfg.thin = 5;
  cfg.seed = 7;
  cfg.inner.step_multiplier = multiplier;
  const ChainOutput chain = run_chain(sc.data, phi, cfg);
  const ScenarioScore s =
      score_scenario(chain.posterior_mean(), sc.truth.theta, sc.truth.zero_set, diagnose_shrinkage(chain));
  StudyFit f{sigma2, multiplier, s, chain.wall_seconds / 60.0};
  note("fit sigma2=" + fmt("%.2f", sigma2) + " inner=" + std::to_string(multiplier) + "n: mse=" +
       fmt("%.4f", s.mse) + " (per entry " + fmt("%.4f", s.mse / spec.T) + ") tp=" + fmt("%.3f", s.tp) +
       " tn=" + fmt("%.3f", s.tn) + " minutes=" + fmt("%.1f", f.minutes));
  return f;
}

std::map<std::pair<double, int>, StudyFit> fits;

const StudyFit& cached_fit(double sigma2, int multiplier) {
  const auto key = std::make_pair(sigma2, multiplier);
  auto it = fits.find(key);
  if (it == fits.end()) it = fits.emplace(key, study_fit(sigma2, multiplier)).first;
  return it->second;
}

void criterion1() {
  const StudyFit& f = cached_fit(0.05, 2);
  const bool ok = f.score.mse <= 0.15 && f.score.tp >= 0.85 && f.score.tn >= 0.80 && f.minutes <= 60.0;
  verdict(1, "simulation study at sigma2=0.05", ok,
          "mse=" + fmt("%.4f", f.score.mse) + " (<=0.15) tp=" + fmt("%.3f", f.score.tp) + " (>=0.85) tn=" +
              fmt("%.3f", f.score.tn) + " (>=0.80) minutes=" + fmt("%.1f", f.minutes) + " (<=60)");
}

void criterion2() {
  std::vector<const StudyFit*> row;
  for (double s2 : {0.05, 0.1, 0.3, 0.5}) row.push_back(&cached_fit(s2, 2));
  bool monotone = true;
  std::string mses;
  for (std::size_t k = 0; k < row.size(); ++k) {
    mses += (k ? "," : "") + fmt("%.4f", row[k]->score.mse);
    if (k > 0 && row[k]->score.mse < row[k - 1]->score.mse) monotone = false;
  }
  const bool tp_drop = row.back()->score.tp < row.front()->score.tp;
  const bool tn_drop = row.back()->score.tn < row.front()->score.tn;
  verdict(2, "degradation with noise", monotone && tp_drop && tn_drop,
          "mse=" + mses + (monotone ? " non-decreasing" : " not monotone") + "; tp " +
              fmt("%.3f", row.front()->score.tp) + "->" + fmt("%.3f", row.back()->score.tp) + ", tn " +
              fmt("%.3f", row.front()->score.tn) + "->" + fmt("%.3f", row.back()->score.tn));
}

void criterion3() {
  double lo = INFINITY, hi = -INFINITY;
  std::string mses;
  for (int m : {2, 4, 8}) {
    const double v = cached_fit(0.05, m).score.mse;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mses += (mses.empty() ? "" : ",") + fmt("%.4f", v);
  }
  verdict(3, "inner-length insensitivity", hi - lo <= 0.05,
          "mse at 2n,4n,8n=" + mses + " spread=" + fmt("%.4f", hi - lo) + " (<=0.05)");
}

// Exact Metropolis-Hastings likelihood ratio from the enumerated normalizer.
class ExactRatio final : public LikelihoodRatio {
 public:
  explicit ExactRatio(const ResponseSlice& x) : stats_(compute_suff_stats(x)), n_(x.n()), p_(x.p()) {}
  double log_ratio(int i, std::span<const double> theta_t, double proposed, Rng&) override {
    std::vector<double> next(theta_t.begin(), theta_t.end());
    next[i] = proposed;
    return static_cast<double>(stats_[i]) * (proposed - theta_t[i]) -
           n_ * (exact_per_respondent_normalizer(next, p_) - exact_per_respondent_normalizer(theta_t, p_));
  }

 private:
  SuffStats stats_;
  int n_;
  int p_;
};

ResponseTensor oracle_data() {
  const ParamIndex idx(3);
  RowMatrix m(3, idx.q());
  m << -0.6, 0.2, -0.3, 0.8, 0.0, -0.5,
       -0.4, 0.1, -0.1, 0.6, 0.1, -0.4,
       -0.2, 0.0, 0.1, 0.4, 0.2, -0.3;
  InnerSamplerConfig inner;
  inner.rng_seed = 31;
  return simulate_dataset(ParamState(idx, m), 100, 100, inner);
}

ChainConfig oracle_chain_config(std::uint64_t seed) {
  ChainConfig cfg;
  cfg.iterations = 40000;
  cfg.burnin = 5000;
  cfg.thin = 5;
  cfg.seed = seed;
  return cfg;
}

struct OracleComparison {
  int outside = 0;
  int total = 0;
  double worst = 0;
};

OracleComparison compare_with_exact(const ResponseTensor& x, const BasisMatrix& phi, int multiplier,
                                    const ChainOutput& exact) {
  ChainConfig cfg = oracle_chain_config(11);
  cfg.inner.step_multiplier = multiplier;
  const ChainOutput dmh = run_chain(x, phi, cfg);
  const RowMatrix a = dmh.posterior_mean();
  const RowMatrix b = exact.posterior_mean();
  OracleComparison c;
  for (int t = 0; t < x.T(); ++t) {
    for (int i = 0; i < dmh.q; ++i) {
      const double se = std::hypot(mcse(dmh.theta_trace(t, i)), mcse(exact.theta_trace(t, i)));
      const double z = std::abs(a(t, i) - b(t, i)) / se;
      c.worst = std::max(c.worst, z);
      c.outside += z > 3.0;
      ++c.total;
    }
  }
  return c;
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const ResponseTensor x = oracle_data();
  const BasisMatrix phi = build_bspline(3, {}, default_kn(3), default_degree(default_kn(3)));
  const ChainOutput exact = run_chain_with_kernel(x, phi, oracle_chain_config(12), [&x](int t) {
    return std::unique_ptr<LikelihoodRatio>(new ExactRatio(x.slice(t)));
  });
  // With n = 100 the default 2n inner steps leave the auxiliary slice close
  // to the observed one, which biases DMH toward zero; 10n steps remove the
  // bias. The 2n comparison is reported for reference.
  const OracleComparison c = compare_with_exact(x, phi, 10, exact);
  const double minutes = seconds_since(t0) / 60.0;
  const OracleComparison short_inner = compare_with_exact(x, phi, 2, exact);
  verdict(4, "DMH agrees with the exact-likelihood chain", c.outside == 0 && minutes < 10.0,
          "inner 10n: " + std::to_string(c.outside) + " of " + std::to_string(c.total) +
              " posterior means beyond 3 MCSE, worst " + fmt("%.2f", c.worst) + " MCSE; minutes=" +
              fmt("%.2f", minutes) + " (<10)");
  note("inner 2n: " + std::to_string(short_inner.outside) + " of " + std::to_string(short_inner.total) +
       " beyond 3 MCSE, worst " + fmt("%.2f", short_inner.worst) + " MCSE");
}

void criterion5() {
  const int draws = 1000000;
  const int T = 20;
  const BasisMatrix phi = build_bspline(T, {}, 6, 3);
  Eigen::VectorXd theta(T);
  for (int t = 0; t < T; ++t) theta[t] = 1.0 + 0.5 * std::sin(0.4 * t);
  FhsConfig cfg;
  const double tau = 0.9;
  const double sigma2 = 0.3;
  std::vector<std::string> fails;

  // beta: N(mean, sigma2 P^-1). Means are judged against max(|mean|, sd).
  const GaussianConditional bc = beta_conditional(theta, tau, phi, cfg.beta_update_mode);
  const Eigen::MatrixXd cov = sigma2 * bc.precision.inverse();
  Rng rng(501);
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(6), s2 = Eigen::VectorXd::Zero(6);
  for (int m = 0; m < draws; ++m) {
    const Eigen::VectorXd d = update_beta(theta, tau, sigma2, phi, cfg, rng) - bc.mean;
    s1 += d;
    s2 += d.cwiseProduct(d);
  }
  double worst_beta = 0;
  for (int r = 0; r < 6; ++r) {
    const double mean_err = s1[r] / draws;
    const double var = s2[r] / draws - mean_err * mean_err;
    const double sd = std::sqrt(cov(r, r));
    worst_beta = std::max({worst_beta, std::abs(mean_err) / std::max(std::abs(bc.mean[r]), sd),
                           std::abs(var / cov(r, r) - 1.0)});
  }
  if (worst_beta > 0.01) fails.push_back("beta");

  // sigma2: inverse gamma mean and variance.
  const Eigen::VectorXd beta = bc.mean;
  const InverseGamma ig = sigma2_conditional(theta, beta, tau, phi, cfg);
  std::vector<double> sv(draws);
  for (double& v : sv) v = update_sigma2(theta, beta, tau, phi, cfg, rng);
  const double ig_mean = ig.scale / (ig.shape - 1);
  const double ig_var = ig_mean * ig_mean / (ig.shape - 2);
  const double sig_err =
      std::max(std::abs(oracle::mean(sv) / ig_mean - 1.0), std::abs(oracle::variance(sv) / ig_var - 1.0));
  if (sig_err > 0.01) fails.push_back("sigma2");

  // eta: stationary marginal of the slice sampler against quadrature.
  const FhsConstants c = fhs_constants(6, T);
  const Eigen::VectorXd beta_eta = 0.3 * Eigen::VectorXd::Ones(6);
  const EtaConditional ec = eta_conditional(beta_eta, sigma2, phi, c.a, c.b);
  std::vector<double> ev(draws);
  double eta = 1.0;
  for (double& v : ev) v = eta = slice_update_eta(eta, beta_eta, sigma2, phi, c.a, c.b, rng);
  const auto grid = oracle::log_grid_cdf([&](double e) { return ec.log_density(e); }, 1e-10, 1e6, 200000);
  const double ks = oracle::ks_distance(ev, grid);
  if (ks >= 0.02) fails.push_back("eta");

  verdict(5, "conditional-update oracles", fails.empty(),
          "beta worst relative error=" + fmt("%.4f", worst_beta) + " sigma2 worst relative error=" +
              fmt("%.4f", sig_err) + " (<=0.01), eta KS=" + fmt("%.4f", ks) + " (<0.02)");
}

void criterion6() {
  const std::vector<double> theta{0.4, -0.7, 1.2};
  double z = 0;
  std::vector<double> prob(4);
  for (int m = 0; m < 4; ++m) {
    prob[m] = std::exp(oracle::unnorm_log_lik({m & 1, (m >> 1) & 1}, 1, 2, theta));
    z += prob[m];
  }
  for (double& v : prob) v /= z;
  // States are recorded every 20 single-entry steps so that records are
  // close to independent, as the chi-square test assumes.
  const SliceGibbs gibbs(theta, 2);
  Rng rng(601);
  ResponseSlice y(1, 2);
  gibbs.run(y, 1000, rng);
  const int records = 1000000;
  std::vector<double> counts(4, 0);
  for (int r = 0; r < records; ++r) {
    gibbs.run(y, 20, rng);
    counts[y(0, 0) | (y(0, 1) << 1)] += 1;
  }
  double chi2 = 0;
  for (int m = 0; m < 4; ++m) chi2 += std::pow(counts[m] - prob[m] * records, 2) / (prob[m] * records);
  const double pval = boost::math::cdf(boost::math::complement(boost::math::chi_squared(3), chi2));

  const std::vector<double> alpha_only{-1.5, -0.2, 0.0, 0.7, 0, 0, 0, 0, 0, 0};
  InnerSamplerConfig inner;
  inner.rng_seed = 602;
  inner.step_multiplier = 100;
  const ResponseSlice s = simulate_slice(alpha_only, 20000, inner);
  double worst = 0;
  for (int j = 0; j < 4; ++j) {
    double m = 0;
    for (int l = 0; l < s.n(); ++l) m += s(l, j);
    worst = std::max(worst, std::abs(m / s.n() - logistic(alpha_only[j])));
  }
  verdict(6, "inner-sampler exactness", pval > 0.01 && worst <= 0.02,
          "chi2=" + fmt("%.3f", chi2) + " p=" + fmt("%.4f", pval) + " (>0.01); independent-item mean error=" +
              fmt("%.4f", worst) + " (<=0.02)");
}

void criterion7() {
  // Easiness follows the scenario design; every interaction is exactly zero.
  const int p = 6, T = 8, n = 600;
  const ParamIndex idx(p);
  RowMatrix m = RowMatrix::Zero(T, idx.q());
  Rng rng(701);
  for (int j = 0; j < p; ++j)
    for (int t = 0; t < T; ++t) m(t, j) = -1.0 + trend(t + 1.0) + std::sqrt(0.05) * std_normal(rng);
  InnerSamplerConfig inner;
  inner.rng_seed = 702;
  const ResponseTensor x = simulate_dataset(ParamState(idx, m), n, 100, inner);
  const BasisMatrix phi = build_bspline(T, {}, kStudyKn, default_degree(kStudyKn));
  ChainConfig cfg;
  cfg.seed = 703;
  const ChainOutput chain = run_chain(x, phi, cfg);
  const ShrinkageReport rep = diagnose_shrinkage(chain);
  int zero = 0;
  for (int i = p; i < idx.q(); ++i) zero += rep.is_zero(i);
  const double frac = static_cast<double>(zero) / idx.interaction_count();
  verdict(7, "shrinkage calibration", frac >= 0.9,
          std::to_string(zero) + " of " + std::to_string(idx.interaction_count()) +
              " null interactions diagnosed zero (" + fmt("%.3f", frac) + " >= 0.90)");
}

void criterion8() {
  ScenarioSpec spec;
  spec.seed = 801;
  const Scenario sc = generate_scenario(spec);
  PpcConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 802;
  const std::vector<ParamState> draws(cfg.replicates, sc.truth.theta);
  const PpcReport r = ppc_summary(sc.data, draws, cfg);
  const double corr = r.summary_correlation();
  const double slope = r.degree_slope();
  verdict(8, "posterior predictive self-consistency", corr >= 0.99 && slope >= 0.95 && slope <= 1.05,
          "summary correlation=" + fmt("%.5f", corr) + " (>=0.99), degree slope=" + fmt("%.4f", slope) +
              " in [0.95,1.05]; summary slope=" + fmt("%.4f", r.summary_slope()) + ", degree correlation=" +
              fmt("%.5f", r.degree_correlation()));
}

void criterion9() {
  const ResponseTensor x = oracle_data();
  const BasisMatrix phi = build_bspline(3, {}, 3, 2);
  ChainConfig cfg = oracle_chain_config(901);
  cfg.iterations = 2000;
  cfg.burnin = 1000;
  const auto before = normalizer_call_count();
  run_chain(x, phi, cfg);
  const auto during = normalizer_call_count() - before;
  // Sanity check that the counter is live.
  exact_per_respondent_normalizer(std::vector<double>(6, 0.0), 3);
  const bool live = normalizer_call_count() == before + 1;
  verdict(9, "DMH path never evaluates a normalizer", during == 0 && live,
          std::to_string(during) + " normalizer calls during a 2000-iteration chain (counter live: " +
              (live ? "yes" : "no") + ")");
}

void criterion10() {
  const ResponseTensor x = oracle_data();
  const BasisMatrix phi = build_bspline(3, {}, 3, 2);
  ChainConfig cfg = oracle_chain_config(1001);
  cfg.iterations = 20000;
  cfg.workers = 4;
  const ChainOutput a = run_chain(x, phi, cfg);
  const ChainOutput b = run_chain(x, phi, cfg);
  const bool identical = a.same_samples(b);
  cfg.workers = 1;
  const ChainOutput c = run_chain(x, phi, cfg);
  const RowMatrix ma = a.posterior_mean();
  const RowMatrix mc = c.posterior_mean();
  double worst = 0;
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < a.q; ++i) {
      const double se = std::hypot(mcse(a.theta_trace(t, i)), mcse(c.theta_trace(t, i)));
      const double d = std::abs(ma(t, i) - mc(t, i));
      worst = std::max(worst, se > 0 ? d / se : (d == 0 ? 0.0 : INFINITY));
    }
  }
  verdict(10, "determinism", identical && worst <= 3.0,
          std::string("same seed and 4 workers bit-identical: ") + (identical ? "yes" : "no") +
              "; 1 vs 4 workers worst difference=" + fmt("%.3f", worst) + " MCSE (<=3), theta identical: " +
              (a.theta == c.theta ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> pick;
  for (int k = 1; k < argc; ++k) pick.insert(std::atoi(argv[k]));
  const auto want = [&](int id) { return pick.empty() || pick.count(id); };
  // Cheap checks first so their verdicts show up early.
  if (want(9)) criterion9();
  if (want(6)) criterion6();
  if (want(5)) criterion5();
  if (want(8)) criterion8();
  if (want(10)) criterion10();
  if (want(4)) criterion4();
  if (want(7)) criterion7();
  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3)) criterion3();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
