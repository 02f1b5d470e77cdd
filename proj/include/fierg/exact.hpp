#pragma once

// Exact enumeration of the FI-ERGM normalizer for small item counts.
//
// Respondents are i.i.d. given theta_t, so the per-slice normalizer
// factorizes as kappa(theta_t) = z(theta_t)^n with z a sum over the 2^p item
// configurations of a single respondent. Lives in the fierg_exact target; the
// DMH chain in the core library never links against it.

#include <cstdint>
#include <span>

#include "fierg/model.hpp"

namespace fierg {

inline constexpr int kMaxEnumerationItems = 20;

// log z(theta_t), overflow-safe. Throws CapacityError for p > 20.
double exact_per_respondent_normalizer(std::span<const double> theta_t, int p);

// log kappa(theta_t) = n * log z(theta_t).
inline double exact_log_normalizer(std::span<const double> theta_t, int p, int n) {
  return n * exact_per_respondent_normalizer(theta_t, p);
}

// sum_t [log_unnorm_lik(stats_t, theta_t) - n log z(theta_t)].
double exact_log_lik(const ResponseTensor& x, const ParamState& theta);

// Number of normalizer evaluations performed by this process so far.
std::uint64_t normalizer_call_count();

}  // namespace fierg
