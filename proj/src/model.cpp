#include "fierg/model.hpp"

#include <cmath>
#include <numeric>

#include "fierg/errors.hpp"

namespace fierg {

ResponseSlice::ResponseSlice(int n, int p)
    : n_(n), p_(p), cells_(static_cast<std::size_t>(n) * p, 0) {
  if (n < 0 || p < 0) throw InvalidInput("slice dimensions must be non-negative");
}

ResponseSlice::ResponseSlice(int n, int p, std::vector<std::uint8_t> cells)
    : n_(n), p_(p), cells_(std::move(cells)) {
  if (n < 0 || p < 0) throw InvalidInput("slice dimensions must be non-negative");
  if (cells_.size() != static_cast<std::size_t>(n) * p)
    throw InvalidInput("slice has " + std::to_string(cells_.size()) + " cells, expected n*p = " +
                       std::to_string(static_cast<std::size_t>(n) * p));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] > 1)
      throw InvalidInput("non-binary entry " + std::to_string(cells_[c]) + " at respondent " +
                         std::to_string(c / p + 1) + ", item " + std::to_string(c % p + 1));
  }
}

ResponseTensor::ResponseTensor(std::vector<ResponseSlice> slices, std::vector<double> time_labels)
    : slices_(std::move(slices)), time_labels_(std::move(time_labels)) {
  if (slices_.empty()) throw InvalidInput("tensor needs at least one time point");
  const int n = slices_.front().n();
  const int p = slices_.front().p();
  if (n < 1) throw InvalidInput("tensor needs at least one respondent");
  if (p < 2) throw InvalidInput("tensor needs at least two items");
  for (const auto& s : slices_) {
    if (s.n() != n || s.p() != p) throw InvalidInput("time slices have different shapes");
  }
  if (!time_labels_.empty()) {
    if (time_labels_.size() != slices_.size())
      throw InvalidInput("time label count does not match the number of time points");
    for (std::size_t t = 1; t < time_labels_.size(); ++t) {
      if (!(time_labels_[t] > time_labels_[t - 1]))
        throw InvalidInput("time labels must be strictly increasing");
    }
  }
}

std::vector<double> ResponseTensor::times() const {
  if (has_time_labels()) return time_labels_;
  std::vector<double> out(slices_.size());
  std::iota(out.begin(), out.end(), 1.0);
  return out;
}

double ResponseTensor::mean() const {
  std::size_t ones = 0, total = 0;
  for (const auto& s : slices_) {
    for (auto v : s.cells()) ones += v;
    total += s.cells().size();
  }
  return total == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total);
}

std::string ParamLabel::str() const {
  if (kind == ParamKind::Easiness) return "alpha_" + std::to_string(j + 1);
  return "gamma_" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
}

ParamIndex::ParamIndex(int p) : p_(p) {
  if (p < 1) throw InvalidInput("item count must be positive");
}

int ParamIndex::easiness(int j) const {
  if (j < 0 || j >= p_) throw InvalidInput("item index out of range");
  return j;
}

int ParamIndex::interaction(int j, int k) const {
  if (j > k) std::swap(j, k);
  if (j < 0 || k >= p_ || j == k) throw InvalidInput("interaction index out of range");
  return p_ + j * p_ - j * (j + 1) / 2 + (k - j - 1);
}

ParamLabel ParamIndex::label(int i) const {
  if (i < 0 || i >= q()) throw InvalidInput("parameter index out of range");
  if (i < p_) return {ParamKind::Easiness, i, -1};
  int offset = i - p_;
  int j = 0;
  while (offset >= p_ - j - 1) {
    offset -= p_ - j - 1;
    ++j;
  }
  return {ParamKind::Interaction, j, j + 1 + offset};
}

ParamState::ParamState(ParamIndex index, int T)
    : index_(index), theta_(RowMatrix::Zero(T, index.q())) {}

ParamState::ParamState(ParamIndex index, RowMatrix theta) : index_(index), theta_(std::move(theta)) {
  if (theta_.cols() != index_.q())
    throw InvalidInput("theta has " + std::to_string(theta_.cols()) + " columns, expected q = " +
                       std::to_string(index_.q()));
  if (!theta_.allFinite()) throw InvalidInput("theta has non-finite entries");
}

ItemItemGraph::ItemItemGraph(const ResponseSlice& x_t)
    : p_(x_t.p()), counts_(static_cast<std::size_t>(x_t.p()) * x_t.p(), 0) {
  for (int l = 0; l < x_t.n(); ++l) {
    auto row = x_t.row(l);
    for (int j = 0; j < p_; ++j) {
      if (!row[j]) continue;
      for (int k = 0; k < p_; ++k) counts_[static_cast<std::size_t>(j) * p_ + k] += row[k];
    }
  }
}

int item_count_from_q(std::size_t q) {
  int p = 1;
  while (static_cast<std::size_t>(ParamIndex(p).q()) < q) ++p;
  if (static_cast<std::size_t>(ParamIndex(p).q()) != q)
    throw InvalidInput("parameter row length " + std::to_string(q) + " is not p + p(p-1)/2 for any p");
  return p;
}

SuffStats compute_suff_stats(const ResponseSlice& x_t) {
  const int p = x_t.p();
  SuffStats s;
  s.margins.assign(p, 0);
  s.cooccur.assign(static_cast<std::size_t>(p) * (p - 1) / 2, 0);
  for (int l = 0; l < x_t.n(); ++l) {
    auto row = x_t.row(l);
    std::size_t c = 0;
    for (int j = 0; j < p; ++j) {
      s.margins[j] += row[j];
      if (!row[j]) {
        c += p - j - 1;
        continue;
      }
      for (int k = j + 1; k < p; ++k, ++c) s.cooccur[c] += row[k];
    }
  }
  return s;
}

double log_unnorm_lik(const SuffStats& stats, std::span<const double> theta_t) {
  if (theta_t.size() != static_cast<std::size_t>(stats.q()))
    throw InvalidInput("parameter row has " + std::to_string(theta_t.size()) +
                       " entries, statistics have " + std::to_string(stats.q()));
  double acc = 0.0;
  const int p = stats.p();
  for (int j = 0; j < p; ++j) acc += theta_t[j] * static_cast<double>(stats.margins[j]);
  for (std::size_t c = 0; c < stats.cooccur.size(); ++c)
    acc += theta_t[p + c] * static_cast<double>(stats.cooccur[c]);
  return acc;
}

double conditional_prob_entry(const ResponseSlice& x_t, int l, int j, std::span<const double> theta_t) {
  const int p = x_t.p();
  const ParamIndex index(p);
  if (theta_t.size() != static_cast<std::size_t>(index.q()))
    throw InvalidInput("parameter row does not match the item count");
  if (l < 0 || l >= x_t.n() || j < 0 || j >= p) throw InvalidInput("cell index out of range");
  double z = theta_t[j];
  auto row = x_t.row(l);
  for (int k = 0; k < p; ++k) {
    if (k != j && row[k]) z += theta_t[index.interaction(j, k)];
  }
  return logistic(z);
}

}  // namespace fierg
