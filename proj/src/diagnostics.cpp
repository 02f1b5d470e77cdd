#include "fierg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fierg/errors.hpp"
#include "fierg/parallel.hpp"
#include "fierg/sampler.hpp"

namespace fierg {

ShrinkageReport diagnose_shrinkage(const std::vector<std::vector<double>>& omega_traces, const ParamIndex& index) {
  if (omega_traces.empty()) throw InvalidInput("no omega traces supplied");
  ShrinkageReport report;
  for (std::size_t i = 0; i < omega_traces.size(); ++i) {
    const auto& tr = omega_traces[i];
    if (tr.empty()) throw InvalidInput("omega trace " + std::to_string(i + 1) + " is empty");
    const double mean = std::accumulate(tr.begin(), tr.end(), 0.0) / static_cast<double>(tr.size());
    const int ii = static_cast<int>(i);
    std::string label = ii < index.q() ? index.label(ii).str() : "theta_" + std::to_string(i + 1);
    const bool zero = mean > kOmegaThreshold;
    report.entries.push_back({ii, std::move(label), mean, zero});
    (zero ? report.zero_count : report.nonzero_count)++;
  }
  return report;
}

ShrinkageReport diagnose_shrinkage(const ChainOutput& chain) {
  std::vector<std::vector<double>> traces(chain.q);
  for (int i = 0; i < chain.q; ++i) traces[i] = chain.omega_trace(i);
  return diagnose_shrinkage(traces, chain.index());
}

double mcse(std::span<const double> trace) {
  const std::size_t len = trace.size();
  if (len < 100) throw InvalidInput("MCSE needs at least 100 draws, got " + std::to_string(len));
  const auto batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(len))));
  const std::size_t batches = len / batch;
  const std::size_t used = batch * batches;
  double grand = 0.0;
  std::vector<double> means(batches);
  for (std::size_t k = 0; k < batches; ++k) {
    double s = 0.0;
    for (std::size_t r = 0; r < batch; ++r) s += trace[k * batch + r];
    means[k] = s / static_cast<double>(batch);
    grand += s;
  }
  grand /= static_cast<double>(used);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_bm = static_cast<double>(batch) * ss / static_cast<double>(batches - 1);
  return std::sqrt(var_bm / static_cast<double>(used));
}

McseSummary chain_mcse(const ChainOutput& chain) {
  McseSummary s;
  double total = 0.0;
  for (int t = 0; t < chain.T; ++t) {
    for (int i = 0; i < chain.q; ++i) {
      const double v = mcse(chain.theta_trace(t, i));
      s.max = std::max(s.max, v);
      total += v;
      ++s.traces;
    }
  }
  s.mean = s.traces ? total / s.traces : 0.0;
  return s;
}

std::vector<double> degree_statistics(const ResponseSlice& x_t) {
  const int p = x_t.p();
  std::vector<std::int64_t> counts(p, 0);
  for (int l = 0; l < x_t.n(); ++l) {
    const auto row = x_t.row(l);
    const int ones = std::accumulate(row.begin(), row.end(), 0);
    // Items answered 1 have degree ones-1, the rest are isolated.
    counts[0] += p - ones;
    if (ones > 0) counts[ones - 1] += ones;
  }
  std::vector<double> out(p);
  for (int m = 0; m < p; ++m) out[m] = static_cast<double>(counts[m]) / static_cast<double>(x_t.n());
  return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidInput("correlation needs two equal-length series");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

double regression_slope(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidInput("regression needs two equal-length series");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
  }
  if (saa == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / saa;
}

namespace {
template <class Row>
std::pair<std::vector<double>, std::vector<double>> split(const std::vector<Row>& rows) {
  std::vector<double> obs, sim;
  obs.reserve(rows.size());
  sim.reserve(rows.size());
  for (const auto& r : rows) {
    obs.push_back(r.observed);
    sim.push_back(r.simulated);
  }
  return {obs, sim};
}
}  // namespace

double PpcReport::summary_correlation() const {
  auto [o, s] = split(summary);
  return pearson_correlation(o, s);
}
double PpcReport::summary_slope() const {
  auto [o, s] = split(summary);
  return regression_slope(o, s);
}
double PpcReport::degree_correlation() const {
  auto [o, s] = split(degree);
  return pearson_correlation(o, s);
}
double PpcReport::degree_slope() const {
  auto [o, s] = split(degree);
  return regression_slope(o, s);
}

PpcReport ppc_summary(const ResponseTensor& x, std::span<const ParamState> draws, const PpcConfig& cfg) {
  if (cfg.replicates < 1) throw InvalidInput("replicate count must be positive");
  if (static_cast<int>(draws.size()) < cfg.replicates)
    throw InvalidInput("posterior predictive check needs " + std::to_string(cfg.replicates) + " draws, got " +
                       std::to_string(draws.size()));
  if (cfg.burn_multiplier < 1) throw ConfigError("burn multiplier must be at least 1");
  const int T = x.T(), n = x.n(), p = x.p();
  const ParamIndex index(p);
  const int q = index.q();
  for (const auto& d : draws) {
    if (d.T() != T || d.index().p() != p) throw InvalidInput("parameter draw shape does not match the data");
  }

  const int R = cfg.replicates;
  const std::size_t per_rep = static_cast<std::size_t>(T) * (q + p);
  std::vector<double> acc(static_cast<std::size_t>(R) * per_rep, 0.0);
  detail::parallel_for(R, cfg.workers, [&](int r) {
    const std::size_t pick = static_cast<std::size_t>(r) * draws.size() / static_cast<std::size_t>(R);
    const ParamState& theta = draws[pick];
    double* out = acc.data() + static_cast<std::size_t>(r) * per_rep;
    for (int t = 0; t < T; ++t) {
      Rng rng = make_stream(cfg.seed, {stream::kPpc, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(t)});
      ResponseSlice y = random_slice(n, p, rng);
      SliceGibbs(theta.row(t), p).run(y, static_cast<std::int64_t>(cfg.burn_multiplier) * n, rng);
      const SuffStats s = compute_suff_stats(y);
      for (int i = 0; i < q; ++i) out[static_cast<std::size_t>(t) * q + i] = static_cast<double>(s[i]);
      const auto deg = degree_statistics(y);
      for (int m = 0; m < p; ++m) out[static_cast<std::size_t>(T) * q + static_cast<std::size_t>(t) * p + m] = deg[m];
    }
  });

  std::vector<double> mean(per_rep, 0.0);
  for (int r = 0; r < R; ++r)
    for (std::size_t k = 0; k < per_rep; ++k) mean[k] += acc[static_cast<std::size_t>(r) * per_rep + k];
  for (auto& v : mean) v /= static_cast<double>(R);

  PpcReport report;
  report.replicates = R;
  for (int t = 0; t < T; ++t) {
    const SuffStats s = compute_suff_stats(x.slice(t));
    for (int i = 0; i < q; ++i)
      report.summary.push_back({t, i, static_cast<double>(s[i]), mean[static_cast<std::size_t>(t) * q + i]});
  }
  for (int t = 0; t < T; ++t) {
    const auto deg = degree_statistics(x.slice(t));
    for (int m = 0; m < p; ++m)
      report.degree.push_back({t, m, deg[m], mean[static_cast<std::size_t>(T) * q + static_cast<std::size_t>(t) * p + m]});
  }
  return report;
}

PpcReport ppc_summary(const ResponseTensor& x, const ChainOutput& chain, const PpcConfig& cfg) {
  std::vector<ParamState> draws;
  draws.reserve(chain.draws);
  for (int d = 0; d < chain.draws; ++d) draws.push_back(chain.draw(d));
  return ppc_summary(x, draws, cfg);
}

ScenarioScore score_scenario(const RowMatrix& estimates, const ParamState& truth, const std::vector<int>& true_zero,
                             const ShrinkageReport& report) {
  if (estimates.rows() != truth.T() || estimates.cols() != truth.q())
    throw InvalidInput("estimate and truth shapes differ");
  if (static_cast<int>(report.entries.size()) != truth.q())
    throw InvalidInput("shrinkage report does not cover every functional parameter");
  const int q = truth.q();
  ScenarioScore score;
  score.mse = (estimates - truth.matrix()).squaredNorm() / static_cast<double>(q);

  std::vector<bool> is_zero(q, false);
  for (int i : true_zero) {
    if (i < 0 || i >= q) throw InvalidInput("true-zero index out of range");
    is_zero[i] = true;
  }
  int zeros = 0, zero_hits = 0, nonzeros = 0, nonzero_hits = 0;
  for (int i = 0; i < q; ++i) {
    if (is_zero[i]) {
      ++zeros;
      zero_hits += report.is_zero(i) ? 1 : 0;
    } else {
      ++nonzeros;
      nonzero_hits += report.is_zero(i) ? 0 : 1;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  score.tp = zeros ? static_cast<double>(zero_hits) / zeros : nan;
  score.tn = nonzeros ? static_cast<double>(nonzero_hits) / nonzeros : nan;
  return score;
}

}  // namespace fierg
