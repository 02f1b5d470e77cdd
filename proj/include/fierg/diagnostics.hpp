#pragma once

// Shrinkage diagnosis, Monte Carlo standard errors, posterior predictive
// checks and simulation-study scoring.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fierg/dmh.hpp"
#include "fierg/model.hpp"

namespace fierg {

inline constexpr double kOmegaThreshold = 0.5;

struct ShrinkageEntry {
  int index;
  std::string label;
  double mean_omega;
  bool zero;  // mean_omega > 0.5
};

struct ShrinkageReport {
  std::vector<ShrinkageEntry> entries;
  int zero_count = 0;
  int nonzero_count = 0;

  bool is_zero(int i) const { return entries.at(i).zero; }
};

// One omega trace per functional parameter. Throws InvalidInput when any
// trace is empty.
ShrinkageReport diagnose_shrinkage(const std::vector<std::vector<double>>& omega_traces, const ParamIndex& index);
ShrinkageReport diagnose_shrinkage(const ChainOutput& chain);

// Batch-means MCSE with batch size floor(sqrt(len)); needs len >= 100.
double mcse(std::span<const double> trace);

struct McseSummary {
  double max = 0.0;
  double mean = 0.0;
  int traces = 0;
};

// MCSE over every theta_{ti} trace of a chain.
McseSummary chain_mcse(const ChainOutput& chain);

// Mean over respondents of the number of items with degree m, m = 0..p-1,
// in each respondent's item-item graph.
std::vector<double> degree_statistics(const ResponseSlice& x_t);

struct PpcConfig {
  int replicates = 1000;
  int burn_multiplier = 100;  // Gibbs steps per replicate slice = burn_multiplier * n
  std::uint64_t seed = 1;
  int workers = 1;
};

struct PpcSummaryRow {
  int t;
  int i;
  double observed;
  double simulated;  // mean over replicates
};

struct PpcDegreeRow {
  int t;
  int m;
  double observed;
  double simulated;
};

struct PpcReport {
  int replicates = 0;
  std::vector<PpcSummaryRow> summary;  // T * q rows
  std::vector<PpcDegreeRow> degree;    // T * p rows

  double summary_correlation() const;
  double summary_slope() const;
  double degree_correlation() const;
  double degree_slope() const;
};

// Simulates one full tensor per replicate from evenly spaced parameter draws
// and compares replicate-mean statistics with the observed ones. Throws
// InvalidInput when fewer draws than replicates are supplied.
PpcReport ppc_summary(const ResponseTensor& x, std::span<const ParamState> draws, const PpcConfig& cfg);
PpcReport ppc_summary(const ResponseTensor& x, const ChainOutput& chain, const PpcConfig& cfg);

double pearson_correlation(std::span<const double> a, std::span<const double> b);
// Least-squares slope of b regressed on a.
double regression_slope(std::span<const double> a, std::span<const double> b);

struct ScenarioScore {
  double mse = 0.0;
  double tp = 0.0;  // true zeros diagnosed zero; NaN when there are none
  double tn = 0.0;  // true nonzeros diagnosed nonzero; NaN when there are none
};

// mse = (1/q) sum_i |theta_hat_.i - theta_.i|^2.
ScenarioScore score_scenario(const RowMatrix& estimates, const ParamState& truth, const std::vector<int>& true_zero,
                             const ShrinkageReport& report);

}  // namespace fierg
