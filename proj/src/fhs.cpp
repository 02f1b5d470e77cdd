#include "fierg/fhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <boost/math/special_functions/gamma.hpp>

#include "fierg/errors.hpp"

namespace fierg {

void FhsConfig::validate() const {
  if (!(a > 0)) throw ConfigError("horseshoe a must be positive");
  if (b && !(*b > 0)) throw ConfigError("horseshoe b must be positive");
  if (!(ig_shape > 0) || !(ig_rate > 0)) throw ConfigError("inverse-gamma hyperparameters must be positive");
  if (!(theta_init_halfwidth > 0) || !(beta_init_sd >= 0) || !(tau_init_sd > 0) || !(sigma2_init > 0))
    throw ConfigError("invalid initialization settings");
}

double FhsConfig::resolved_b(int k_n, int T) const { return b ? *b : fhs_constants(k_n, T).b; }

void FhsState::set_tau(double value) {
  if (!(value > 0)) throw InvalidState("tau must be positive");
  tau = value;
  eta = 1.0 / (value * value);
}

void FhsState::set_eta(double value) {
  if (!(value > 0)) throw InvalidState("eta must be positive");
  eta = value;
  tau = 1.0 / std::sqrt(value);
}

double omega(double tau) { return 1.0 / (1.0 + tau * tau); }

double penalty_quadratic(const Eigen::VectorXd& beta, const BasisMatrix& phi) {
  return beta.dot(phi.penalty() * beta);
}

double log_prior_theta(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double sigma2,
                       const BasisMatrix& phi) {
  if (!(sigma2 > 0)) throw InvalidState("sigma2 must be positive");
  if (theta_col.size() != phi.T() || beta.size() != phi.k_n())
    throw InvalidInput("prior dimensions do not match the basis");
  const double r = (theta_col - phi.phi() * beta).squaredNorm();
  return -0.5 * phi.T() * std::log(2.0 * std::numbers::pi * sigma2) - r / (2.0 * sigma2);
}

double EtaConditional::log_density(double eta) const {
  if (!(eta > 0)) return -std::numeric_limits<double>::infinity();
  return (shape - 1.0) * std::log(eta) - rate * eta - power * std::log1p(eta);
}

EtaConditional eta_conditional(const Eigen::VectorXd& beta, double sigma2, const BasisMatrix& phi, double a,
                               double b) {
  if (!(sigma2 > 0)) throw InvalidState("sigma2 must be positive");
  return {a + 0.5 * (phi.k_n() - phi.d0()), penalty_quadratic(beta, phi) / (2.0 * sigma2), a + b};
}

double eta_slice_bound(double log_u, double power) { return std::expm1(-log_u / power); }

double sample_truncated_gamma(double shape, double rate, double upper, Rng& rng) {
  const double v = uniform01(rng);
  const auto power_law = [&] { return upper * std::pow(v, 1.0 / shape); };
  if (rate <= 0.0) {
    if (!std::isfinite(upper)) throw InvalidState("improper eta conditional: zero rate and unbounded slice");
    return power_law();
  }
  const double x = rate * upper;
  double mass = 1.0;
  if (std::isfinite(upper)) {
    if (x < 1e-12) return power_law();
    mass = boost::math::gamma_p(shape, x);
    if (!(mass > 0.0)) return power_law();
  }
  const double target = v * mass;
  if (!(target > 0.0)) return power_law();
  const double draw = boost::math::gamma_p_inv(shape, target) / rate;
  return std::isfinite(upper) ? std::min(draw, upper) : draw;
}

double slice_update_eta(double eta, const Eigen::VectorXd& beta, double sigma2, const BasisMatrix& phi, double a,
                        double b, Rng& rng) {
  if (!(eta > 0)) throw InvalidState("eta must be positive");
  const EtaConditional cond = eta_conditional(beta, sigma2, phi, a, b);
  // u ~ U[0, (1+eta)^-(a+b)], kept on the log scale.
  const double log_u = std::log(uniform01(rng)) - cond.power * std::log1p(eta);
  const double upper = eta_slice_bound(log_u, cond.power);
  const double next = sample_truncated_gamma(cond.shape, cond.rate, std::min(upper, kMaxEta), rng);
  return std::clamp(next, 1.0 / kMaxEta, kMaxEta);
}

double CollapsedEta::log_density(double log_eta) const {
  const double bound = std::log(kMaxEta);
  if (!(log_eta >= -bound && log_eta <= bound)) return -std::numeric_limits<double>::infinity();
  const double eta = std::exp(log_eta);
  double v = shape * log_eta - power * std::log1p(eta);
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (lambda[j] == 0.0) continue;
    const double le = lambda[j] * eta;
    v -= 0.5 * std::log1p(le) + weight[j] * le / (1.0 + le);
  }
  return v;
}

CollapsedEta collapsed_eta(const Eigen::VectorXd& theta_col, double sigma2, const BasisMatrix& phi, double a,
                           double b) {
  if (!(sigma2 > 0)) throw InvalidState("sigma2 must be positive");
  if (theta_col.size() != phi.T()) throw InvalidInput("theta column length does not match the basis");
  const Eigen::VectorXd z = phi.penalty_vectors().transpose() * (phi.phi().transpose() * theta_col);
  return {a + 0.5 * (phi.k_n() - phi.d0()), a + b, phi.penalty_values(), z.array().square() / (2.0 * sigma2)};
}

namespace {

// Neal (2003) slice sampler with the doubling procedure.
template <class F>
double slice_doubling(double x0, const F& logf, double width, int max_doublings, Rng& rng) {
  const double logy = logf(x0) - std::exponential_distribution<double>(1.0)(rng);
  double left = x0 - width * uniform01(rng);
  double right = left + width;
  double f_left = logf(left);
  double f_right = logf(right);
  for (int k = 0; k < max_doublings && (logy < f_left || logy < f_right); ++k) {
    if (uniform01(rng) < 0.5) {
      left -= right - left;
      f_left = logf(left);
    } else {
      right += right - left;
      f_right = logf(right);
    }
  }
  const auto acceptable = [&](double x1) {
    double l = left;
    double r = right;
    bool differ = false;
    while (r - l > 1.1 * width) {
      const double mid = 0.5 * (l + r);
      if ((x0 < mid) != (x1 < mid)) differ = true;
      if (x1 < mid) {
        r = mid;
      } else {
        l = mid;
      }
      if (differ && logy >= logf(l) && logy >= logf(r)) return false;
    }
    return true;
  };
  double lo = left;
  double hi = right;
  for (;;) {
    const double x1 = lo + uniform01(rng) * (hi - lo);
    if (logy < logf(x1) && acceptable(x1)) return x1;
    if (x1 < x0) {
      lo = x1;
    } else {
      hi = x1;
    }
    if (hi - lo < 1e-12) return x0;
  }
}

}  // namespace

double collapsed_update_eta(double eta, const Eigen::VectorXd& theta_col, double sigma2, const BasisMatrix& phi,
                            double a, double b, Rng& rng) {
  if (!(eta > 0)) throw InvalidState("eta must be positive");
  const CollapsedEta dens = collapsed_eta(theta_col, sigma2, phi, a, b);
  const double bound = std::log(kMaxEta);
  const double x0 = std::clamp(std::log(eta), -bound, bound);
  const double x1 = slice_doubling(x0, [&](double l) { return dens.log_density(l); }, 2.0, 12, rng);
  return std::exp(x1);
}

InverseGamma sigma2_conditional(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double tau,
                                const BasisMatrix& phi, const FhsConfig& cfg) {
  if (!(tau > 0)) throw InvalidState("tau must be positive");
  const double s = penalty_quadratic(beta, phi);
  const double tau2 = tau * tau;
  if (cfg.sigma2_update_mode == UpdateMode::AlgorithmVerbatim) {
    const double fit = beta.dot(phi.gram() * beta);
    return {0.5 * phi.T() + 0.5 * phi.k_n() + cfg.ig_shape, fit / 2.0 + s / (2.0 * tau2) + cfg.ig_rate};
  }
  const double r = (theta_col - phi.phi() * beta).squaredNorm();
  return {0.5 * phi.T() + 0.5 * (phi.k_n() - phi.d0()) + cfg.ig_shape, r / 2.0 + s / (2.0 * tau2) + cfg.ig_rate};
}

double update_sigma2(const Eigen::VectorXd& theta_col, const Eigen::VectorXd& beta, double tau,
                     const BasisMatrix& phi, const FhsConfig& cfg, Rng& rng) {
  const InverseGamma ig = sigma2_conditional(theta_col, beta, tau, phi, cfg);
  const double g = std::gamma_distribution<double>(ig.shape, 1.0)(rng);
  return ig.scale / g;
}

GaussianConditional beta_conditional(const Eigen::VectorXd& theta_col, double tau, const BasisMatrix& phi,
                                     UpdateMode mode) {
  if (!(tau > 0)) throw InvalidState("tau must be positive");
  if (theta_col.size() != phi.T()) throw InvalidInput("theta column length does not match the basis");
  const double inv_tau2 = 1.0 / (tau * tau);
  Eigen::MatrixXd precision = phi.gram();
  if (mode == UpdateMode::AlgorithmVerbatim) {
    precision.diagonal().array() += inv_tau2;
  } else {
    precision += inv_tau2 * phi.penalty();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) throw FactorizationError("beta precision matrix is not positive definite");
  Eigen::VectorXd mean = llt.solve(phi.phi().transpose() * theta_col);
  return {std::move(mean), std::move(precision)};
}

Eigen::VectorXd update_beta(const Eigen::VectorXd& theta_col, double tau, double sigma2, const BasisMatrix& phi,
                            const FhsConfig& cfg, Rng& rng) {
  if (!(sigma2 > 0)) throw InvalidState("sigma2 must be positive");
  const GaussianConditional cond = beta_conditional(theta_col, tau, phi, cfg.beta_update_mode);
  Eigen::LLT<Eigen::MatrixXd> llt(cond.precision);
  Eigen::VectorXd z(phi.k_n());
  for (Eigen::Index r = 0; r < z.size(); ++r) z[r] = std_normal(rng);
  // P = L L'  =>  L'^{-1} z ~ N(0, P^{-1}).
  Eigen::VectorXd noise = llt.matrixU().solve(z);
  return cond.mean + std::sqrt(sigma2) * noise;
}

void update_hyperparameters(FhsState& state, const Eigen::VectorXd& theta_col, const BasisMatrix& phi,
                            const FhsConfig& cfg, double a, double b, Rng& rng) {
  if (cfg.collapsed_eta && cfg.beta_update_mode == UpdateMode::ModelConsistent &&
      cfg.sigma2_update_mode == UpdateMode::ModelConsistent) {
    state.set_eta(collapsed_update_eta(state.eta, theta_col, state.sigma2, phi, a, b, rng));
    state.beta = update_beta(theta_col, state.tau, state.sigma2, phi, cfg, rng);
  }
  state.set_eta(slice_update_eta(state.eta, state.beta, state.sigma2, phi, a, b, rng));
  state.sigma2 = update_sigma2(theta_col, state.beta, state.tau, phi, cfg, rng);
  state.beta = update_beta(theta_col, state.tau, state.sigma2, phi, cfg, rng);
}

InitialState init_state(const ParamIndex& index, int T, int k_n, const FhsConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  InitialState out{ParamState(index, T), std::vector<FhsState>(index.q())};
  for (int i = 0; i < index.q(); ++i) {
    Rng rng = make_stream(seed, {stream::kInit, static_cast<std::uint64_t>(i)});
    std::uniform_real_distribution<double> unif(-cfg.theta_init_halfwidth, cfg.theta_init_halfwidth);
    for (int t = 0; t < T; ++t) out.theta(t, i) = unif(rng);
    FhsState& h = out.hyper[i];
    h.beta.resize(k_n);
    for (int r = 0; r < k_n; ++r) h.beta[r] = cfg.beta_init_sd * std_normal(rng);
    double tau = std::abs(cfg.tau_init_sd * std_normal(rng));
    if (!(tau > 0)) tau = cfg.tau_init_sd;
    h.set_tau(tau);
    h.sigma2 = cfg.sigma2_init;
  }
  return out;
}

}  // namespace fierg
