#pragma once

// Prespecified B-spline design over observation times and the null-space
// projector used by the functional horseshoe prior.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace fierg {

class BasisMatrix {
 public:
  BasisMatrix() = default;
  // phi must have full column rank and k_n <= T. Null space starts empty.
  BasisMatrix(Eigen::MatrixXd phi, int degree, std::vector<double> knots);

  int T() const { return static_cast<int>(phi_.rows()); }
  int k_n() const { return static_cast<int>(phi_.cols()); }
  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }

  const Eigen::MatrixXd& phi() const { return phi_; }
  const Eigen::MatrixXd& null_basis() const { return null_basis_; }
  const Eigen::MatrixXd& q0() const { return q0_; }
  int d0() const { return d0_; }

  // Phi' Phi and Phi' (I - Q0) Phi, cached.
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& penalty() const { return penalty_; }

  // Generalized eigenpairs of (penalty, gram): V' gram V = I and
  // V' penalty V = diag(lambda), lambda = 0 along the null space.
  const Eigen::VectorXd& penalty_values() const { return penalty_values_; }
  const Eigen::MatrixXd& penalty_vectors() const { return penalty_vectors_; }

  // Shrink toward span(phi0) instead of the zero function. phi0 has T rows;
  // an empty matrix restores Q0 = 0.
  void set_null_basis(const Eigen::MatrixXd& phi0);

 private:
  Eigen::MatrixXd phi_;
  int degree_ = 0;
  std::vector<double> knots_;
  Eigen::MatrixXd null_basis_;
  Eigen::MatrixXd q0_;
  int d0_ = 0;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd penalty_;
  Eigen::VectorXd penalty_values_;
  Eigen::MatrixXd penalty_vectors_;

  void update_penalty_eigen();
};

// k_n B-spline functions of the given degree on a clamped knot vector over
// [min(times), max(times)], interior knots at time quantiles. Empty times
// means 1..T. Throws ConfigError unless 0 <= degree < k_n <= T.
BasisMatrix build_bspline(int T, std::span<const double> times, int k_n, int degree);

// min(T, floor(T/2) + 2) and min(3, k_n - 1).
int default_kn(int T);
int default_degree(int k_n);

struct FhsConstants {
  double a;
  double b;
};

// a = 1/2, b = exp(-k_n log(T) / 2).
FhsConstants fhs_constants(int k_n, int T);

}  // namespace fierg
