#include "fierg/sampler.hpp"

#include <cmath>

#include "fierg/errors.hpp"

namespace fierg {

void InnerSamplerConfig::validate() const {
  if (step_multiplier < 1) throw ConfigError("inner step multiplier must be at least 1");
}

SliceGibbs::SliceGibbs(std::span<const double> theta_t, int p)
    : p_(p), index_(p), alpha_(p), coupling_(static_cast<std::size_t>(p) * p, 0.0) {
  if (theta_t.size() != static_cast<std::size_t>(index_.q()))
    throw InvalidInput("parameter row does not match the item count");
  for (int j = 0; j < p; ++j) alpha_[j] = theta_t[j];
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      const double g = theta_t[index_.interaction(j, k)];
      coupling_[static_cast<std::size_t>(j) * p + k] = g;
      coupling_[static_cast<std::size_t>(k) * p + j] = g;
    }
  }
}

void SliceGibbs::set_parameter(int i, double value) {
  const auto label = index_.label(i);
  if (label.kind == ParamKind::Easiness) {
    alpha_[label.j] = value;
  } else {
    coupling_[static_cast<std::size_t>(label.j) * p_ + label.k] = value;
    coupling_[static_cast<std::size_t>(label.k) * p_ + label.j] = value;
  }
}

double SliceGibbs::logit(const ResponseSlice& y, int l, int j) const {
  const auto row = y.row(l);
  const double* c = coupling_.data() + static_cast<std::size_t>(j) * p_;
  double z = alpha_[j];
  for (int k = 0; k < p_; ++k) z += c[k] * row[k];
  return z;
}

bool SliceGibbs::update_cell(ResponseSlice& y, int l, int j, Rng& rng, SuffStats* stats) const {
  const double prob = logistic(logit(y, l, j));
  const std::uint8_t next = uniform01(rng) < prob ? 1 : 0;
  if (next == y(l, j)) return false;
  y.set(l, j, next);
  if (stats) {
    const std::int64_t d = next ? 1 : -1;
    stats->margins[j] += d;
    const auto row = y.row(l);
    for (int k = 0; k < p_; ++k) {
      if (k == j || !row[k]) continue;
      stats->cooccur[index_.interaction(j, k) - p_] += d;
    }
  }
  return true;
}

void SliceGibbs::run(ResponseSlice& y, std::int64_t steps, Rng& rng, SuffStats* stats, UpdateRule rule) const {
  if (y.p() != p_) throw InvalidInput("slice item count does not match the parameters");
  if (y.n() == 0) return;
  if (rule == UpdateRule::RandomScanRow) {
    std::uniform_int_distribution<int> pick(0, y.n() - 1);
    for (std::int64_t s = 0; s < steps; ++s) {
      const int l = pick(rng);
      for (int j = 0; j < p_; ++j) update_cell(y, l, j, rng, stats);
    }
    return;
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(y.n()) * p_;
  std::uniform_int_distribution<std::uint64_t> pick(0, cells - 1);
  for (std::int64_t s = 0; s < steps; ++s) {
    const std::uint64_t c = pick(rng);
    update_cell(y, static_cast<int>(c / p_), static_cast<int>(c % p_), rng, stats);
  }
}

ResponseSlice random_slice(int n, int p, Rng& rng) {
  ResponseSlice y(n, p);
  for (auto& v : y.cells()) v = static_cast<std::uint8_t>(rng() >> 63);
  return y;
}

ResponseSlice simulate_slice(std::span<const double> theta_t, const ResponseSlice& init,
                             const InnerSamplerConfig& cfg) {
  cfg.validate();
  for (double v : theta_t) {
    if (!std::isfinite(v)) throw InvalidInput("theta_t has non-finite entries");
  }
  SliceGibbs gibbs(theta_t, init.p());
  Rng rng(cfg.rng_seed);
  ResponseSlice y = init;
  gibbs.run(y, static_cast<std::int64_t>(cfg.step_multiplier) * init.n(), rng, nullptr, cfg.update_rule);
  return y;
}

ResponseSlice simulate_slice(std::span<const double> theta_t, int n, const InnerSamplerConfig& cfg) {
  cfg.validate();
  const int p = item_count_from_q(theta_t.size());
  Rng rng = make_stream(cfg.rng_seed, {stream::kSlice});
  const ResponseSlice init = random_slice(n, p, rng);
  InnerSamplerConfig inner = cfg;
  inner.rng_seed = derive_seed(cfg.rng_seed, {stream::kSlice, 1});
  return simulate_slice(theta_t, init, inner);
}

ResponseTensor simulate_dataset(const ParamState& theta, int n, int burn_multiplier,
                                const InnerSamplerConfig& cfg, std::vector<double> time_labels) {
  if (burn_multiplier < 1) throw ConfigError("burn multiplier must be at least 1");
  if (n < 1) throw ConfigError("respondent count must be positive");
  const int p = theta.index().p();
  std::vector<ResponseSlice> slices(theta.T());
  for (int t = 0; t < theta.T(); ++t) {
    Rng rng = make_stream(cfg.rng_seed, {stream::kSlice, static_cast<std::uint64_t>(t)});
    ResponseSlice y = random_slice(n, p, rng);
    SliceGibbs(theta.row(t), p).run(y, static_cast<std::int64_t>(burn_multiplier) * n, rng);
    slices[t] = std::move(y);
  }
  return ResponseTensor(std::move(slices), std::move(time_labels));
}

}  // namespace fierg
