#pragma once

// FI-ERGM probability model: binary response data, the parameter layout,
// sufficient statistics and the unnormalized likelihood.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fierg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One time point of the data: n respondents by p binary items, row major.
class ResponseSlice {
 public:
  ResponseSlice() = default;
  ResponseSlice(int n, int p);
  // Throws InvalidInput if any cell is not 0 or 1 or the size is wrong.
  ResponseSlice(int n, int p, std::vector<std::uint8_t> cells);

  int n() const { return n_; }
  int p() const { return p_; }

  std::uint8_t operator()(int l, int j) const { return cells_[static_cast<std::size_t>(l) * p_ + j]; }
  void set(int l, int j, std::uint8_t v) { cells_[static_cast<std::size_t>(l) * p_ + j] = v; }

  std::span<const std::uint8_t> row(int l) const {
    return {cells_.data() + static_cast<std::size_t>(l) * p_, static_cast<std::size_t>(p_)};
  }
  std::span<const std::uint8_t> cells() const { return cells_; }
  std::span<std::uint8_t> cells() { return cells_; }

  friend bool operator==(const ResponseSlice&, const ResponseSlice&) = default;

 private:
  int n_ = 0;
  int p_ = 0;
  std::vector<std::uint8_t> cells_;
};

// x in {0,1}^{T x n x p}, with optional real-valued observation times.
class ResponseTensor {
 public:
  ResponseTensor() = default;
  // Requires T >= 1, n >= 1, p >= 2, equal slice shapes and strictly
  // increasing time labels (when given, one per slice).
  explicit ResponseTensor(std::vector<ResponseSlice> slices, std::vector<double> time_labels = {});

  int T() const { return static_cast<int>(slices_.size()); }
  int n() const { return slices_.empty() ? 0 : slices_.front().n(); }
  int p() const { return slices_.empty() ? 0 : slices_.front().p(); }

  const ResponseSlice& slice(int t) const { return slices_[t]; }
  std::uint8_t operator()(int t, int l, int j) const { return slices_[t](l, j); }

  bool has_time_labels() const { return !time_labels_.empty(); }
  const std::vector<double>& time_labels() const { return time_labels_; }
  // Observation times; 1..T when no labels are attached.
  std::vector<double> times() const;

  double mean() const;

  // Same cells and same observation times (default times equal labels 1..T).
  friend bool operator==(const ResponseTensor& a, const ResponseTensor& b) {
    return a.slices_ == b.slices_ && a.times() == b.times();
  }

 private:
  std::vector<ResponseSlice> slices_;
  std::vector<double> time_labels_;
};

enum class ParamKind { Easiness, Interaction };

// Item indices are 0-based in code and 1-based in every printed label.
struct ParamLabel {
  ParamKind kind;
  int j;
  int k;  // -1 for easiness

  std::string str() const;
};

// Bijection between flat parameter index i in [0, q) and its label:
// the p easiness parameters first, then interactions (j,k), j<k, in
// lexicographic order.
class ParamIndex {
 public:
  ParamIndex() = default;
  explicit ParamIndex(int p);

  int p() const { return p_; }
  int q() const { return p_ + p_ * (p_ - 1) / 2; }
  int interaction_count() const { return p_ * (p_ - 1) / 2; }

  int easiness(int j) const;
  // Order of j and k does not matter; j != k.
  int interaction(int j, int k) const;
  ParamLabel label(int i) const;
  bool is_interaction(int i) const { return i >= p_; }

  friend bool operator==(const ParamIndex&, const ParamIndex&) = default;

 private:
  int p_ = 0;
};

// theta in R^{T x q}; row t holds all parameters at time t, column i one
// functional parameter.
class ParamState {
 public:
  ParamState() = default;
  ParamState(ParamIndex index, int T);
  // Throws InvalidInput on shape mismatch or non-finite entries.
  ParamState(ParamIndex index, RowMatrix theta);

  const ParamIndex& index() const { return index_; }
  int T() const { return static_cast<int>(theta_.rows()); }
  int q() const { return static_cast<int>(theta_.cols()); }

  double alpha(int t, int j) const { return theta_(t, index_.easiness(j)); }
  double gamma(int t, int j, int k) const { return theta_(t, index_.interaction(j, k)); }
  double& operator()(int t, int i) { return theta_(t, i); }
  double operator()(int t, int i) const { return theta_(t, i); }

  std::span<const double> row(int t) const {
    return {theta_.data() + static_cast<std::size_t>(t) * theta_.cols(), static_cast<std::size_t>(theta_.cols())};
  }
  std::span<double> row(int t) {
    return {theta_.data() + static_cast<std::size_t>(t) * theta_.cols(), static_cast<std::size_t>(theta_.cols())};
  }
  Eigen::VectorXd column(int i) const { return theta_.col(i); }

  const RowMatrix& matrix() const { return theta_; }
  RowMatrix& matrix() { return theta_; }

 private:
  ParamIndex index_;
  RowMatrix theta_;
};

// Per-slice sufficient statistics: item margins and pairwise co-occurrence
// counts, the latter in ParamIndex interaction order.
struct SuffStats {
  std::vector<std::int64_t> margins;
  std::vector<std::int64_t> cooccur;

  int p() const { return static_cast<int>(margins.size()); }
  int q() const { return static_cast<int>(margins.size() + cooccur.size()); }
  // Statistic paired with flat parameter index i.
  std::int64_t operator[](int i) const {
    return i < p() ? margins[i] : cooccur[i - p()];
  }

  friend bool operator==(const SuffStats&, const SuffStats&) = default;
};

// Item-item co-occurrence network A_t; counts(j,j) are the margins.
class ItemItemGraph {
 public:
  explicit ItemItemGraph(const ResponseSlice& x_t);

  int p() const { return p_; }
  std::int64_t operator()(int j, int k) const { return counts_[static_cast<std::size_t>(j) * p_ + k]; }

  // Edge (j,k) of respondent l's own item graph.
  static bool edge(const ResponseSlice& x_t, int l, int j, int k) {
    return j != k && x_t(l, j) && x_t(l, k);
  }

 private:
  int p_;
  std::vector<std::int64_t> counts_;
};

// Inverse of q = p + p(p-1)/2; throws InvalidInput when q has no such p.
int item_count_from_q(std::size_t q);

SuffStats compute_suff_stats(const ResponseSlice& x_t);

// sum_j alpha_j * margins_j + sum_{j<k} gamma_jk * cooccur_jk.
double log_unnorm_lik(const SuffStats& stats, std::span<const double> theta_t);

// P(x_tlj = 1 | all other entries) = logistic(alpha_j + sum_{k != j} gamma_jk x_lk).
double conditional_prob_entry(const ResponseSlice& x_t, int l, int j, std::span<const double> theta_t);

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace fierg
