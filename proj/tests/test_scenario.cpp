#include <cmath>
#include <numbers>

#include "doctest.h"

#include "fierg/errors.hpp"
#include "fierg/scenario.hpp"

using namespace fierg;

TEST_CASE("trend function") {
  CHECK(trend(0.0) == doctest::Approx(0.125));
  CHECK(trend(2.0) == doctest::Approx(0.125));
  CHECK(trend(0.5) == doctest::Approx(0.125));
  CHECK(trend(1.0) == doctest::Approx(-0.125));
}

TEST_CASE("default group design") {
  ScenarioSpec spec;
  const GroupSizes g = spec.group_sizes();
  CHECK(g.zero == 22);
  CHECK(g.negative == 11);
  CHECK(g.positive == 12);
  spec.p = 4;
  const GroupSizes s = spec.group_sizes();
  CHECK(s.zero + s.negative + s.positive == 6);
  spec.zero_count = 6;
  spec.negative_count = 0;
  CHECK(spec.group_sizes().positive == 0);
  spec.positive_count = 1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK(parse_param_group(to_string(ParamGroup::Negative)) == ParamGroup::Negative);
  CHECK_THROWS_AS(parse_param_group("big"), InvalidInput);
}

TEST_CASE("noiseless truth follows level plus trend") {
  ScenarioSpec spec;
  spec.sigma2 = 0.0;
  Rng rng(1);
  const ScenarioTruth truth = generate_truth(spec, rng);
  CHECK(truth.theta.q() == 55);
  CHECK(truth.zero_set.size() == 22);
  int neg = 0, pos = 0;
  for (int i = 0; i < 55; ++i) {
    for (int t = 0; t < 8; ++t) CHECK(truth.theta(t, i) == doctest::Approx(truth.levels[i] + trend(t + 1.0)));
    if (i < 10) CHECK(truth.groups[i] == ParamGroup::Easiness);
    neg += truth.groups[i] == ParamGroup::Negative;
    pos += truth.groups[i] == ParamGroup::Positive;
  }
  CHECK(neg == 11);
  CHECK(pos == 12);
  for (int i : truth.zero_set) CHECK(truth.levels[i] == 0.0);

  spec.grid = TimeGrid::Unit;
  Rng rng2(1);
  const ScenarioTruth unit = generate_truth(spec, rng2);
  CHECK(unit.theta(3, 0) == doctest::Approx(-1.0 + trend(4.0 / 8.0)));
}

TEST_CASE("noise has the requested variance") {
  ScenarioSpec spec;
  spec.p = 20;
  spec.T = 50;
  spec.sigma2 = 0.3;
  Rng rng(4);
  const ScenarioTruth truth = generate_truth(spec, rng);
  double ss = 0;
  int count = 0;
  for (int i = 0; i < truth.theta.q(); ++i) {
    for (int t = 0; t < spec.T; ++t) {
      const double r = truth.theta(t, i) - truth.levels[i] - trend(t + 1.0);
      ss += r * r;
      ++count;
    }
  }
  CHECK(ss / count == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("scenario generation is seeded") {
  ScenarioSpec spec;
  spec.n = 40;
  spec.p = 4;
  spec.T = 3;
  spec.burn_multiplier = 20;
  const Scenario a = generate_scenario(spec);
  const Scenario b = generate_scenario(spec);
  CHECK(a.data == b.data);
  CHECK(a.truth.theta.matrix() == b.truth.theta.matrix());
  CHECK(a.data.T() == 3);
  CHECK(a.data.n() == 40);
  CHECK(a.data.p() == 4);
  spec.seed = 2;
  CHECK_FALSE(generate_scenario(spec).data == a.data);

  ScenarioSpec extreme = spec;
  extreme.easiness_level = -10.0;
  extreme.zero_count = 6;
  extreme.negative_count = 0;
  extreme.positive_count = 0;
  extreme.sigma2 = 0.0;
  extreme.burn_multiplier = 100;
  CHECK(generate_scenario(extreme).data.mean() < 1e-3);
}
