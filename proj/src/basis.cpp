#include "fierg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fierg/errors.hpp"

namespace fierg {

namespace {

// Linear-interpolation quantile of sorted values.
double quantile(std::span<const double> sorted, double prob) {
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Index s with knots[s] <= x < knots[s+1], clamped to the last non-empty span.
int find_span(const std::vector<double>& knots, int degree, int n_basis, double x) {
  if (x >= knots[n_basis]) return n_basis - 1;
  auto it = std::upper_bound(knots.begin() + degree, knots.begin() + n_basis + 1, x);
  return static_cast<int>(it - knots.begin()) - 1;
}

// Nonzero basis values N_{s-degree..s} at x (triangular table).
void basis_funs(const std::vector<double>& knots, int span, int degree, double x, std::vector<double>& out) {
  out.assign(degree + 1, 0.0);
  std::vector<double> left(degree + 1), right(degree + 1);
  out[0] = 1.0;
  for (int d = 1; d <= degree; ++d) {
    left[d] = x - knots[span + 1 - d];
    right[d] = knots[span + d] - x;
    double saved = 0.0;
    for (int r = 0; r < d; ++r) {
      const double temp = out[r] / (right[r + 1] + left[d - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[d - r] * temp;
    }
    out[d] = saved;
  }
}

}  // namespace

BasisMatrix::BasisMatrix(Eigen::MatrixXd phi, int degree, std::vector<double> knots)
    : phi_(std::move(phi)), degree_(degree), knots_(std::move(knots)) {
  if (phi_.cols() < 1 || phi_.cols() > phi_.rows())
    throw ConfigError("basis needs 1 <= k_n <= T columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi_);
  if (qr.rank() < phi_.cols()) throw ConfigError("basis matrix is not of full column rank");
  set_null_basis(Eigen::MatrixXd());
}

void BasisMatrix::set_null_basis(const Eigen::MatrixXd& phi0) {
  const auto T = phi_.rows();
  gram_ = phi_.transpose() * phi_;
  if (phi0.size() == 0) {
    null_basis_.resize(T, 0);
    q0_ = Eigen::MatrixXd::Zero(T, T);
    d0_ = 0;
    penalty_ = gram_;
    update_penalty_eigen();
    return;
  }
  if (phi0.rows() != T) throw ConfigError("null basis must have T rows");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi0);
  if (qr.rank() < phi0.cols()) throw ConfigError("null basis is not of full column rank");
  null_basis_ = phi0;
  const Eigen::MatrixXd g0 = phi0.transpose() * phi0;
  q0_ = phi0 * g0.llt().solve(phi0.transpose());
  d0_ = static_cast<int>(phi0.cols());
  penalty_ = phi_.transpose() * (Eigen::MatrixXd::Identity(T, T) - q0_) * phi_;
  penalty_ = 0.5 * (penalty_ + penalty_.transpose());
  update_penalty_eigen();
}

void BasisMatrix::update_penalty_eigen() {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(penalty_, gram_);
  if (solver.info() != Eigen::Success) throw FactorizationError("generalized eigendecomposition of the penalty failed");
  penalty_values_ = solver.eigenvalues().cwiseMax(0.0);
  // Null directions come out as round-off; snap them to exact zeros.
  const double top = penalty_values_.size() ? penalty_values_.maxCoeff() : 0.0;
  for (Eigen::Index j = 0; j < penalty_values_.size(); ++j) {
    if (penalty_values_[j] < 1e-10 * top) penalty_values_[j] = 0.0;
  }
  penalty_vectors_ = solver.eigenvectors();
}

BasisMatrix build_bspline(int T, std::span<const double> times, int k_n, int degree) {
  if (T < 1) throw ConfigError("basis needs at least one time point");
  if (k_n > T) throw ConfigError("k_n = " + std::to_string(k_n) + " exceeds T = " + std::to_string(T));
  if (degree < 0 || degree >= k_n)
    throw ConfigError("spline degree must satisfy 0 <= degree < k_n (degree " + std::to_string(degree) +
                      ", k_n " + std::to_string(k_n) + ")");
  std::vector<double> x(T);
  if (times.empty()) {
    std::iota(x.begin(), x.end(), 1.0);
  } else {
    if (static_cast<int>(times.size()) != T) throw ConfigError("need one observation time per time point");
    x.assign(times.begin(), times.end());
    for (int t = 1; t < T; ++t) {
      if (!(x[t] > x[t - 1])) throw ConfigError("observation times must be strictly increasing");
    }
  }

  const double lo = x.front();
  const double hi = x.back();
  std::vector<double> knots;
  knots.reserve(k_n + degree + 1);
  knots.insert(knots.end(), degree + 1, lo);
  const int interior = k_n - degree - 1;
  for (int j = 1; j <= interior; ++j)
    knots.push_back(quantile(x, static_cast<double>(j) / static_cast<double>(interior + 1)));
  knots.insert(knots.end(), degree + 1, hi);

  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(T, k_n);
  if (T == 1 || lo == hi) {
    phi.col(0).setOnes();
  } else {
    std::vector<double> vals;
    for (int t = 0; t < T; ++t) {
      const int span = find_span(knots, degree, k_n, x[t]);
      basis_funs(knots, span, degree, x[t], vals);
      for (int r = 0; r <= degree; ++r) phi(t, span - degree + r) = vals[r];
    }
  }
  return BasisMatrix(std::move(phi), degree, std::move(knots));
}

int default_kn(int T) { return std::max(1, std::min(T, T / 2 + 2)); }

int default_degree(int k_n) { return std::max(0, std::min(3, k_n - 1)); }

FhsConstants fhs_constants(int k_n, int T) {
  if (k_n < 1) throw ConfigError("k_n must be positive");
  if (T < 1) throw ConfigError("T must be positive");
  return {0.5, std::exp(-static_cast<double>(k_n) * std::log(static_cast<double>(T)) / 2.0)};
}

}  // namespace fierg
