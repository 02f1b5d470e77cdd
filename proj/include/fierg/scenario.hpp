#pragma once

// Synthetic FI-ERGM scenarios: cyclic-trend functional parameters with
// Gaussian perturbations and the response tensors simulated from them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fierg/model.hpp"
#include "fierg/rng.hpp"

namespace fierg {

// Argument of the trend: t = 1..T, or t/T on the unit interval.
enum class TimeGrid { Integer, Unit };

enum class ParamGroup { Easiness, Zero, Negative, Positive };

std::string to_string(ParamGroup g);
ParamGroup parse_param_group(const std::string& s);

struct GroupSizes {
  int zero;
  int negative;
  int positive;
};

struct ScenarioSpec {
  int n = 600;
  int p = 10;
  int T = 8;
  double sigma2 = 0.05;
  TimeGrid grid = TimeGrid::Integer;

  double easiness_level = -1.0;
  double negative_level = -1.0;
  double positive_level = 1.0;
  // Interaction group sizes; unset means the 22/11/12 split of 45 scaled to
  // p(p-1)/2 interactions.
  std::optional<int> zero_count;
  std::optional<int> negative_count;
  std::optional<int> positive_count;

  std::uint64_t seed = 1;
  int burn_multiplier = 100;

  GroupSizes group_sizes() const;
  void validate() const;
};

// (cos(pi t) + sin(pi t)) / 8.
double trend(double t);

struct ScenarioTruth {
  ParamState theta;
  std::vector<int> zero_set;        // flat indices in the zero group, ascending
  std::vector<ParamGroup> groups;   // per flat index
  std::vector<double> levels;       // per flat index
};

// Every trajectory is level + trend(t) + N(0, sigma2) per time point.
// Interaction indices are assigned to groups by a seeded random partition.
ScenarioTruth generate_truth(const ScenarioSpec& spec, Rng& rng);

struct Scenario {
  ResponseTensor data;
  ScenarioTruth truth;
};

// Truth from stream (seed, truth); data from simulate_dataset with
// burn_multiplier * n Gibbs steps per slice.
Scenario generate_scenario(const ScenarioSpec& spec);

}  // namespace fierg
