#pragma once

// Reference sampler for small p: the same Gibbs sweep as run_chain, but each
// theta coordinate is updated by plain Metropolis-Hastings on the exact
// likelihood (enumerated normalizer) instead of the DMH auxiliary ratio.

#include "fierg/dmh.hpp"

namespace fierg {

class ExactLikelihoodRatio final : public LikelihoodRatio {
 public:
  explicit ExactLikelihoodRatio(const ResponseSlice& x_t);

  double log_ratio(int i, std::span<const double> theta_t, double proposed, Rng& rng) override;

 private:
  SuffStats stats_;
  int n_;
  int p_;
  std::vector<double> row_;
};

ChainOutput run_exact_chain(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg);

}  // namespace fierg
