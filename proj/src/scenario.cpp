#include "fierg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fierg/errors.hpp"
#include "fierg/sampler.hpp"

namespace fierg {

std::string to_string(ParamGroup g) {
  switch (g) {
    case ParamGroup::Easiness: return "easiness";
    case ParamGroup::Zero: return "zero";
    case ParamGroup::Negative: return "negative";
    case ParamGroup::Positive: return "positive";
  }
  return "unknown";
}

ParamGroup parse_param_group(const std::string& s) {
  if (s == "easiness") return ParamGroup::Easiness;
  if (s == "zero") return ParamGroup::Zero;
  if (s == "negative") return ParamGroup::Negative;
  if (s == "positive") return ParamGroup::Positive;
  throw InvalidInput("unknown parameter group '" + s + "'");
}

GroupSizes ScenarioSpec::group_sizes() const {
  const int m = p * (p - 1) / 2;
  const int zero = zero_count.value_or(static_cast<int>(std::lround(m * 22.0 / 45.0)));
  const int neg = negative_count.value_or(static_cast<int>(std::lround(m * 11.0 / 45.0)));
  const int pos = positive_count.value_or(m - zero - neg);
  return {zero, neg, pos};
}

void ScenarioSpec::validate() const {
  if (n < 1 || p < 2 || T < 1) throw ConfigError("scenario needs n >= 1, p >= 2, T >= 1");
  if (!(sigma2 >= 0)) throw ConfigError("scenario noise variance must be non-negative");
  if (burn_multiplier < 1) throw ConfigError("burn multiplier must be at least 1");
  const GroupSizes g = group_sizes();
  const int m = p * (p - 1) / 2;
  if (g.zero < 0 || g.negative < 0 || g.positive < 0 || g.zero + g.negative + g.positive != m)
    throw ConfigError("interaction group sizes " + std::to_string(g.zero) + "+" + std::to_string(g.negative) + "+" +
                      std::to_string(g.positive) + " do not sum to p(p-1)/2 = " + std::to_string(m));
}

double trend(double t) { return (std::cos(std::numbers::pi * t) + std::sin(std::numbers::pi * t)) / 8.0; }

ScenarioTruth generate_truth(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const ParamIndex index(spec.p);
  const int q = index.q();
  const GroupSizes sizes = spec.group_sizes();

  std::vector<int> interactions(index.interaction_count());
  std::iota(interactions.begin(), interactions.end(), spec.p);
  std::shuffle(interactions.begin(), interactions.end(), rng);

  ScenarioTruth truth{ParamState(index, spec.T), {}, std::vector<ParamGroup>(q), std::vector<double>(q)};
  for (int j = 0; j < spec.p; ++j) {
    truth.groups[j] = ParamGroup::Easiness;
    truth.levels[j] = spec.easiness_level;
  }
  for (std::size_t r = 0; r < interactions.size(); ++r) {
    const int i = interactions[r];
    const int rr = static_cast<int>(r);
    if (rr < sizes.zero) {
      truth.groups[i] = ParamGroup::Zero;
      truth.levels[i] = 0.0;
    } else if (rr < sizes.zero + sizes.negative) {
      truth.groups[i] = ParamGroup::Negative;
      truth.levels[i] = spec.negative_level;
    } else {
      truth.groups[i] = ParamGroup::Positive;
      truth.levels[i] = spec.positive_level;
    }
  }
  for (int i = 0; i < q; ++i) {
    if (truth.groups[i] == ParamGroup::Zero) truth.zero_set.push_back(i);
  }

  const double sd = std::sqrt(spec.sigma2);
  for (int i = 0; i < q; ++i) {
    for (int t = 0; t < spec.T; ++t) {
      const double time = spec.grid == TimeGrid::Integer ? t + 1.0 : (t + 1.0) / spec.T;
      truth.theta(t, i) = truth.levels[i] + trend(time) + sd * std_normal(rng);
    }
  }
  return truth;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  Rng rng = make_stream(spec.seed, {stream::kTruth});
  ScenarioTruth truth = generate_truth(spec, rng);
  InnerSamplerConfig inner;
  inner.rng_seed = derive_seed(spec.seed, {stream::kSlice});
  ResponseTensor data = simulate_dataset(truth.theta, spec.n, spec.burn_multiplier, inner);
  return {std::move(data), std::move(truth)};
}

}  // namespace fierg
