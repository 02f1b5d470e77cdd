#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "fierg/diagnostics.hpp"
#include "fierg/errors.hpp"

using namespace fierg;

TEST_CASE("shrinkage diagnosis uses the posterior mean of omega against 0.5") {
  const ParamIndex idx(2);
  const ShrinkageReport r = diagnose_shrinkage({{0.9, 0.8}, {0.1, 0.2}, {0.5, 0.5}}, idx);
  CHECK(r.is_zero(0));
  CHECK_FALSE(r.is_zero(1));
  CHECK_FALSE(r.is_zero(2));
  CHECK(r.entries[2].label == "gamma_1_2");
  CHECK(r.entries[0].mean_omega == doctest::Approx(0.85));
  CHECK(r.zero_count == 1);
  CHECK(r.nonzero_count == 2);
  CHECK_THROWS_AS(diagnose_shrinkage({{0.1}, {}}, idx), InvalidInput);
  CHECK_THROWS_AS(diagnose_shrinkage({}, idx), InvalidInput);
}

TEST_CASE("batch-means MCSE") {
  CHECK_THROWS_AS(mcse(std::vector<double>(99, 1.0)), InvalidInput);
  CHECK(mcse(std::vector<double>(400, 2.5)) == 0.0);

  // Hand-computed: 100 draws, batch size 10, batch means 0..9.
  std::vector<double> v(100);
  for (int k = 0; k < 100; ++k) v[k] = k / 10;
  const double var_bm = 10.0 * (82.5 / 9.0);
  CHECK(mcse(v) == doctest::Approx(std::sqrt(var_bm / 100.0)));

  // Unit-variance AR(1): asymptotic variance of the mean is (1+rho)/(1-rho)/N.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  const double rho = 0.6;
  const int len = 400000;
  std::vector<double> ar(len);
  double x = 0;
  for (int k = 0; k < len; ++k) {
    x = rho * x + std::sqrt(1 - rho * rho) * z(rng);
    ar[k] = x;
  }
  const double truth = std::sqrt((1 + rho) / (1 - rho) / len);
  CHECK(mcse(ar) == doctest::Approx(truth).epsilon(0.15));
}

TEST_CASE("degree statistics") {
  // Respondent with k ones contributes k items of degree k-1 and p-k of degree 0.
  const ResponseSlice x(3, 4, {1, 1, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0});
  const auto d = degree_statistics(x);
  REQUIRE(d.size() == 4);
  CHECK(d[0] == doctest::Approx((1.0 + 4.0 + 2.0) / 3.0));
  CHECK(d[1] == doctest::Approx(2.0 / 3.0));
  CHECK(d[2] == doctest::Approx(3.0 / 3.0));
  CHECK(d[3] == 0.0);
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(4.0));

  // Brute force from each respondent's item graph.
  std::mt19937_64 rng(2);
  std::vector<std::uint8_t> cells(25 * 6);
  for (auto& c : cells) c = rng() & 1U;
  const ResponseSlice y(25, 6, cells);
  std::vector<double> ref(6, 0.0);
  for (int l = 0; l < 25; ++l) {
    for (int j = 0; j < 6; ++j) {
      int deg = 0;
      for (int k = 0; k < 6; ++k) deg += ItemItemGraph::edge(y, l, j, k);
      ref[deg] += 1.0 / 25;
    }
  }
  const auto got = degree_statistics(y);
  for (int m = 0; m < 6; ++m) CHECK(got[m] == doctest::Approx(ref[m]));
}

TEST_CASE("correlation and slope") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2.5, 4.5, 6.5, 8.5, 10.5};
  CHECK(pearson_correlation(a, b) == doctest::Approx(1.0));
  CHECK(regression_slope(a, b) == doctest::Approx(2.0));
  const std::vector<double> c{5, 4, 3, 2, 1};
  CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0));
  CHECK(std::isnan(pearson_correlation(a, std::vector<double>(5, 1.0))));
  CHECK_THROWS_AS(regression_slope(a, std::vector<double>{1, 2}), InvalidInput);
}

TEST_CASE("posterior predictive check under the generating parameters") {
  const ParamIndex idx(4);
  RowMatrix m = RowMatrix::Zero(2, idx.q());
  for (int j = 0; j < 4; ++j) {
    m(0, j) = -0.5 + 0.3 * j;
    m(1, j) = 0.4 - 0.2 * j;
  }
  m(0, idx.interaction(0, 1)) = 1.0;
  m(1, idx.interaction(2, 3)) = -1.0;
  const ParamState theta(idx, m);
  InnerSamplerConfig inner;
  inner.rng_seed = 12;
  const ResponseTensor x = simulate_dataset(theta, 300, 50, inner);

  PpcConfig cfg;
  cfg.replicates = 40;
  cfg.burn_multiplier = 30;
  const std::vector<ParamState> draws(40, theta);
  const PpcReport r = ppc_summary(x, draws, cfg);
  CHECK(r.summary.size() == 2 * 10u);
  CHECK(r.degree.size() == 2 * 4u);
  CHECK(r.summary_correlation() > 0.98);
  CHECK(r.degree_correlation() > 0.98);
  CHECK(r.degree_slope() == doctest::Approx(1.0).epsilon(0.1));

  cfg.workers = 2;
  const PpcReport r2 = ppc_summary(x, draws, cfg);
  for (std::size_t k = 0; k < r.summary.size(); ++k) CHECK(r.summary[k].simulated == r2.summary[k].simulated);

  cfg.replicates = 41;
  CHECK_THROWS_AS(ppc_summary(x, draws, cfg), InvalidInput);
}

TEST_CASE("scenario scoring") {
  const ParamIndex idx(2);
  RowMatrix truth_m(2, 3);
  truth_m << 0, 0, 1, 0, 0, 1;
  const ParamState truth(idx, truth_m);
  RowMatrix est = truth_m;
  est(0, 0) = 0.3;
  est(1, 2) = 0.6;
  const ShrinkageReport rep = diagnose_shrinkage({{0.3}, {0.9}, {0.7}}, idx);
  const ScenarioScore s = score_scenario(est, truth, {1}, rep);
  CHECK(s.mse == doctest::Approx((0.09 + 0.16) / 3.0));
  CHECK(s.tp == 1.0);
  CHECK(s.tn == 0.5);
  const ScenarioScore none = score_scenario(est, truth, {}, rep);
  CHECK(std::isnan(none.tp));
  CHECK_THROWS_AS(score_scenario(est, truth, {5}, rep), InvalidInput);
}
