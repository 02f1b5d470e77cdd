#pragma once

// Response simulation at fixed theta_t by single-entry Gibbs updates.

#include <cstdint>
#include <span>
#include <vector>

#include "fierg/model.hpp"
#include "fierg/rng.hpp"

namespace fierg {

enum class UpdateRule {
  // Each step picks a uniform (respondent, item) cell and redraws it from its
  // full conditional.
  RandomScanEntry,
  // Each step picks a uniform respondent and redraws all p of their items in
  // turn, each from its full conditional.
  RandomScanRow,
};

struct InnerSamplerConfig {
  int step_multiplier = 2;  // steps = step_multiplier * n
  UpdateRule update_rule = UpdateRule::RandomScanEntry;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Precomputed coupling table for one theta_t; runs Gibbs steps on a slice in
// place, optionally keeping its sufficient statistics in sync.
class SliceGibbs {
 public:
  SliceGibbs(std::span<const double> theta_t, int p);

  // Overwrites coordinate i of the cached parameters.
  void set_parameter(int i, double value);

  void run(ResponseSlice& y, std::int64_t steps, Rng& rng, SuffStats* stats = nullptr,
           UpdateRule rule = UpdateRule::RandomScanEntry) const;

  // Conditional logit alpha_j + sum_{k != j} gamma_jk y_lk.
  double logit(const ResponseSlice& y, int l, int j) const;

 private:
  int p_;
  ParamIndex index_;
  std::vector<double> alpha_;
  std::vector<double> coupling_;  // p x p, zero diagonal

  bool update_cell(ResponseSlice& y, int l, int j, Rng& rng, SuffStats* stats) const;
};

// step_multiplier * n random-scan Gibbs steps starting from init.
ResponseSlice simulate_slice(std::span<const double> theta_t, const ResponseSlice& init,
                             const InnerSamplerConfig& cfg);

// Same, starting from a uniform-random n x p slice.
ResponseSlice simulate_slice(std::span<const double> theta_t, int n, const InnerSamplerConfig& cfg);

// Independently simulates every time slice from a uniform-random start with
// burn_multiplier * n steps. Slice t uses the stream (cfg.rng_seed, t).
ResponseTensor simulate_dataset(const ParamState& theta, int n, int burn_multiplier,
                                const InnerSamplerConfig& cfg, std::vector<double> time_labels = {});

// Uniform-random binary slice.
ResponseSlice random_slice(int n, int p, Rng& rng);

}  // namespace fierg
