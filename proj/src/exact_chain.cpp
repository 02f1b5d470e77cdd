#include "fierg/exact_chain.hpp"

#include "fierg/exact.hpp"

namespace fierg {

ExactLikelihoodRatio::ExactLikelihoodRatio(const ResponseSlice& x_t)
    : stats_(compute_suff_stats(x_t)), n_(x_t.n()), p_(x_t.p()) {}

double ExactLikelihoodRatio::log_ratio(int i, std::span<const double> theta_t, double proposed, Rng&) {
  row_.assign(theta_t.begin(), theta_t.end());
  row_[i] = proposed;
  return log_unnorm_lik(stats_, row_) - log_unnorm_lik(stats_, theta_t) -
         n_ * (exact_per_respondent_normalizer(row_, p_) - exact_per_respondent_normalizer(theta_t, p_));
}

ChainOutput run_exact_chain(const ResponseTensor& x, const BasisMatrix& phi, const ChainConfig& cfg) {
  return run_chain_with_kernel(x, phi, cfg, [&x](int t) -> std::unique_ptr<LikelihoodRatio> {
    return std::make_unique<ExactLikelihoodRatio>(x.slice(t));
  });
}

}  // namespace fierg
