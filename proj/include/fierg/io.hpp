#pragma once

// Text formats for tensors, chains and report tables.
//
// Long CSV (canonical):   time,respondent,item,value   one row per cell
// Dense CSV:              time,respondent,<item labels...>   one row per respondent and time
//
// Chain files carry a versioned key/value header followed by counted numeric
// sections and an END trailer; anything short of that is rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fierg/diagnostics.hpp"
#include "fierg/dmh.hpp"
#include "fierg/model.hpp"
#include "fierg/scenario.hpp"

namespace fierg {

enum class TensorFormat { Long, Dense };

TensorFormat parse_tensor_format(const std::string& s);
std::string to_string(TensorFormat f);

struct TensorDims {
  int T;
  int n;
  int p;
};

struct LoadedTensor {
  ResponseTensor tensor;
  std::vector<std::string> time_labels;
  std::vector<std::string> respondent_labels;
  std::vector<std::string> item_labels;
};

// With declared dims every label must be an integer index in 1..dim.
// Otherwise dims are the distinct labels, ordered numerically when all labels
// are numbers and by first appearance otherwise. Numeric time labels become
// the tensor's observation times.
LoadedTensor load_tensor(const std::filesystem::path& path, TensorFormat format,
                         std::optional<TensorDims> dims = std::nullopt);
LoadedTensor parse_tensor(std::istream& in, TensorFormat format, std::optional<TensorDims> dims = std::nullopt);

void save_tensor(const std::filesystem::path& path, const ResponseTensor& x, TensorFormat format = TensorFormat::Long);
void write_tensor(std::ostream& out, const ResponseTensor& x, TensorFormat format = TensorFormat::Long);

inline constexpr int kChainFormatVersion = 1;

void save_chain(const std::filesystem::path& path, const ChainOutput& chain);
void write_chain(std::ostream& out, const ChainOutput& chain);
// Throws VersionError on a version mismatch and IntegrityError on truncated
// or inconsistent content.
ChainOutput load_chain(const std::filesystem::path& path);
ChainOutput read_chain(std::istream& in);

// T x q table: time column then one column per ParamIndex label.
void write_estimates_csv(std::ostream& out, const RowMatrix& estimates, const ParamIndex& index,
                         const std::vector<double>& times);
void save_estimates_csv(const std::filesystem::path& path, const RowMatrix& estimates, const ParamIndex& index,
                        const std::vector<double>& times);
RowMatrix read_estimates_csv(std::istream& in, const ParamIndex& index);
RowMatrix load_estimates_csv(const std::filesystem::path& path, const ParamIndex& index);

// Scenario bundle: tensor.csv, truth.csv (t,i,label,value),
// zero_set.csv (i,label) and groups.csv (i,label,group,level).
void save_scenario_bundle(const std::filesystem::path& dir, const Scenario& scenario);
ScenarioTruth load_truth_bundle(const std::filesystem::path& dir);

void write_truth_csv(std::ostream& out, const ScenarioTruth& truth);
ParamState read_truth_csv(std::istream& in);

void write_shrinkage_csv(std::ostream& out, const ShrinkageReport& report);
void write_ppc_summary_csv(std::ostream& out, const PpcReport& report, const ParamIndex& index);
void write_ppc_degree_csv(std::ostream& out, const PpcReport& report);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace fierg
