#include "fierg/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "fierg/errors.hpp"

namespace fierg {

namespace {
std::atomic<std::uint64_t> g_normalizer_calls{0};
}

std::uint64_t normalizer_call_count() { return g_normalizer_calls.load(); }

double exact_per_respondent_normalizer(std::span<const double> theta_t, int p) {
  g_normalizer_calls.fetch_add(1, std::memory_order_relaxed);
  if (p > kMaxEnumerationItems)
    throw CapacityError("exact normalizer enumerates 2^p states; p = " + std::to_string(p) +
                        " exceeds the limit of " + std::to_string(kMaxEnumerationItems));
  if (p < 1) throw InvalidInput("item count must be positive");
  const ParamIndex index(p);
  if (theta_t.size() != static_cast<std::size_t>(index.q()))
    throw InvalidInput("parameter row does not match the item count");

  // Gray-code walk: each step flips one item and updates the exponent in O(p).
  const std::uint64_t states = std::uint64_t{1} << p;
  std::vector<double> exponents(states);
  std::vector<std::uint8_t> v(p, 0);
  double e = 0.0;
  exponents[0] = 0.0;
  for (std::uint64_t s = 1; s < states; ++s) {
    const int j = std::countr_zero(s);
    double delta = theta_t[j];
    for (int k = 0; k < p; ++k) {
      if (k != j && v[k]) delta += theta_t[index.interaction(j, k)];
    }
    if (v[j]) {
      e -= delta;
      v[j] = 0;
    } else {
      e += delta;
      v[j] = 1;
    }
    exponents[s] = e;
  }
  const double mx = *std::max_element(exponents.begin(), exponents.end());
  double acc = 0.0;
  for (double x : exponents) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

double exact_log_lik(const ResponseTensor& x, const ParamState& theta) {
  if (theta.T() != x.T() || theta.index().p() != x.p())
    throw InvalidInput("parameter shape does not match the data");
  double total = 0.0;
  for (int t = 0; t < x.T(); ++t) {
    const auto stats = compute_suff_stats(x.slice(t));
    total += log_unnorm_lik(stats, theta.row(t)) -
             x.n() * exact_per_respondent_normalizer(theta.row(t), x.p());
  }
  return total;
}

}  // namespace fierg
