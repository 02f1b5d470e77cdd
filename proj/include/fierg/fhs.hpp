#pragma once

// Functional horseshoe prior on each functional parameter theta_{.i}:
//
//   theta_{.i} | beta, sigma2   ~ N(Phi beta, sigma2 I_T)
//   beta | sigma2, tau          ∝ (sigma2 tau^2)^{-(k_n-d0)/2} exp{-beta' Phi'(I-Q0) Phi beta / (2 sigma2 tau^2)}
//   tau                         ∝ (tau^2)^{b-1/2} / (1+tau^2)^{a+b}
//   sigma2                      ~ IG(ig_shape, ig_rate)
//
// and the Gibbs updates for (eta = tau^-2, sigma2, beta).

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fierg/basis.hpp"
#include "fierg/model.hpp"
#include "fierg/rng.hpp"

namespace fierg {

// ModelConsistent uses the conditionals implied by the hierarchy above.
// AlgorithmVerbatim uses the alternative update formulas: sigma2 scale
// beta'Phi'Phi beta/2 + ... and beta precision Phi'Phi + I/tau^2.
enum class UpdateMode { ModelConsistent, AlgorithmVerbatim };

struct FhsConfig {
  double a = 0.5;
  std::optional<double> b;  // default exp(-k_n log T / 2)
  double ig_shape = 0.01;
  double ig_rate = 0.01;
  UpdateMode beta_update_mode = UpdateMode::ModelConsistent;
  UpdateMode sigma2_update_mode = UpdateMode::ModelConsistent;
  // Extra (eta, beta) block move with beta integrated out; only used when
  // both update modes are ModelConsistent.
  bool collapsed_eta = true;

  double theta_init_halfwidth = 5.0;
  double beta_init_sd = 1.0;
  double tau_init_sd = 0.22360679774997896;  // 1/sqrt(20)
  double sigma2_init = 1.0;

  void validate() const;
  double resolved_b(int k_n, int T) const;
};

struct FhsState {
  Eigen::VectorXd beta;
  double tau = 1.0;
  double eta = 1.0;  // tau^-2
  double sigma2 = 1.0;

  void set_tau(double value);
  void set_eta(double value);
  // 1/(1+tau^2), evaluated as eta/(1+eta).
  double omega() const { return eta / (1.0 + eta); }
};

double omega(double tau);

// eta is confined to [1/kMaxEta, kMaxEta]; the prior is truncated there.
inline constexpr double kMaxEta = 1e200;

// beta' Phi'(I-Q0) Phi beta.
double penalty_quadratic(const Eigen::VectorXd& beta, const BasisMatrix& phi);

// Gaussian log density of theta_col under N(Phi beta, sigma2 I_T).
double log_prior_theta(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double sigma2,
                       const BasisMatrix& phi);

// Unnormalized log density of the eta full conditional:
// (a + (k_n-d0)/2 - 1) log eta - c eta - (a+b) log(1+eta).
struct EtaConditional {
  double shape;  // a + (k_n - d0)/2
  double rate;   // c = beta' Phi'(I-Q0) Phi beta / (2 sigma2)
  double power;  // a + b

  double log_density(double eta) const;
};

EtaConditional eta_conditional(const Eigen::VectorXd& beta, double sigma2, const BasisMatrix& phi, double a,
                               double b);

// Upper end of the slice {eta : (1+eta)^-(a+b) >= u}, given log u.
double eta_slice_bound(double log_u, double power);

// Gamma(shape, rate) restricted to [0, upper]; rate may be 0 (power law).
double sample_truncated_gamma(double shape, double rate, double upper, Rng& rng);

// One slice-sampling transition for eta.
double slice_update_eta(double eta, const Eigen::VectorXd& beta, double sigma2, const BasisMatrix& phi, double a,
                        double b, Rng& rng);

// log eta density of eta | theta_col, sigma2 with beta integrated out:
//   (a + (k_n-d0)/2) l - (a+b) log(1+e^l) - 1/2 sum_j log(1 + lambda_j e^l)
//     - sum_j z_j^2 lambda_j e^l / (2 sigma2 (1 + lambda_j e^l)),
// with (lambda, V) the penalty eigenpairs and z = V' Phi' theta_col.
struct CollapsedEta {
  double shape;  // a + (k_n - d0)/2
  double power;  // a + b
  Eigen::VectorXd lambda;
  Eigen::VectorXd weight;  // z_j^2 / (2 sigma2)

  double log_density(double log_eta) const;
};

CollapsedEta collapsed_eta(const Eigen::VectorXd& theta_col, double sigma2, const BasisMatrix& phi, double a,
                           double b);

// One doubling slice-sampler transition on log eta for the collapsed density.
double collapsed_update_eta(double eta, const Eigen::VectorXd& theta_col, double sigma2, const BasisMatrix& phi,
                            double a, double b, Rng& rng);

struct InverseGamma {
  double shape;
  double scale;
};

InverseGamma sigma2_conditional(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double tau,
                                const BasisMatrix& phi, const FhsConfig& cfg);

double update_sigma2(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double tau,
                     const BasisMatrix& phi, const FhsConfig& cfg, Rng& rng);

struct GaussianConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;  // P; covariance is sigma2 P^-1
};

GaussianConditional beta_conditional(const Eigen::VectorXd& theta_col, double tau, const BasisMatrix& phi,
                                     UpdateMode mode);

Eigen::VectorXd update_beta(const Eigen::VectorXd& theta_col, double tau, double sigma2, const BasisMatrix& phi,
                            const FhsConfig& cfg, Rng& rng);

// [collapsed eta -> beta] when enabled, then eta -> sigma2 -> beta.
void update_hyperparameters(FhsState& state, const Eigen::VectorXd& theta_col, const BasisMatrix& phi,
                            const FhsConfig& cfg, double a, double b, Rng& rng);

struct InitialState {
  ParamState theta;
  std::vector<FhsState> hyper;
};

// theta ~ U(-5,5), beta ~ N(0,I), tau = |N(0, 1/sqrt(20))|, sigma2 = 1.
InitialState init_state(const ParamIndex& index, int T, int k_n, const FhsConfig& cfg, std::uint64_t seed);

}  // namespace fierg
