#pragma once

// Partially-pooled hierarchical model of the population's foundation
// stiffness, and the per-structure no-pooling variant.  Both expose the log
// posterior and its exact gradient in an unconstrained sampling space:
//
//   omega_ik ~ Normal(f(s_ik), gamma)          (likelihood through surrogate)
//   s_ik     ~ Normal(E_sk, V_sk)              (latent stiffness realisations)
//   E_sk     ~ Normal(E_mu, V_mu)              (structure means)
//   V_sk     ~ Normal(E_sigma, V_sigma) > 0    (structure variances, truncated)
//   E_mu, V_mu, E_sigma, V_sigma, gamma ~ Gamma(shape, rate) hyper-priors
//
// Convention: the second argument of every Normal is a VARIANCE (the
// likelihood is written with gamma^2 elsewhere; here gamma itself carries
// variance units so one convention holds throughout, see README).
//
// Positive parameters are sampled as logs with their Jacobians; E_sk is
// sampled on an affine scale (prior mean as unit) since the model does not
// constrain its sign.  The V_sk truncation contributes -log Phi(E_sigma /
// sqrt(V_sigma)) per structure, differentiated along with everything else.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pileshm/common.hpp"
#include "pileshm/popgen.hpp"
#include "pileshm/rng.hpp"
#include "pileshm/surrogate.hpp"

namespace pileshm {

// Gamma shape/rate pairs for the five population-level parameters.  Defaults
// are chosen so the prior-predictive stiffness band sits inside the default
// NREL surrogate domain [2e6, 1e7] with 99.9% mass, and gamma (the
// measurement-noise variance) gets the deliberately narrow prior that keeps
// it from trading variance against E_sigma.
struct HyperPriorConfig {
  double alpha_0 = 100.0, beta_0 = 2.5e-5;  // E_mu: mean 4e6 N/m^2, sd 4e5
  double alpha_1 = 2.0, beta_1 = 1.0e-10;   // V_mu: mean 2e10, sd 1.4e10
  double alpha_2 = 4.0, beta_2 = 1.0e-10;   // E_sigma: mean 4e10, sd 2e10
  double alpha_3 = 2.0, beta_3 = 2.0e-19;   // V_sigma: mean 1e19, sd 7.1e18
  double alpha_4 = 400.0, beta_4 = 4.0e10;  // gamma: mean 1e-8 Hz^2, sd 5e-10

  void validate() const {
    const double v[] = {alpha_0, beta_0, alpha_1, beta_1, alpha_2,
                        beta_2,  alpha_3, beta_3, alpha_4, beta_4};
    for (double x : v)
      if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("hyper-prior shapes and rates must be strictly positive");
  }
};

inline void to_json(nlohmann::json& j, const HyperPriorConfig& c) {
  j = {{"alpha_0", c.alpha_0}, {"beta_0", c.beta_0}, {"alpha_1", c.alpha_1},
       {"beta_1", c.beta_1},   {"alpha_2", c.alpha_2}, {"beta_2", c.beta_2},
       {"alpha_3", c.alpha_3}, {"beta_3", c.beta_3}, {"alpha_4", c.alpha_4},
       {"beta_4", c.beta_4}};
}

inline void from_json(const nlohmann::json& j, HyperPriorConfig& c) {
  c = HyperPriorConfig{};
  auto get = [&](const char* key, double& out) {
    if (j.contains(key)) j.at(key).get_to(out);
  };
  get("alpha_0", c.alpha_0);
  get("beta_0", c.beta_0);
  get("alpha_1", c.alpha_1);
  get("beta_1", c.beta_1);
  get("alpha_2", c.alpha_2);
  get("beta_2", c.beta_2);
  get("alpha_3", c.alpha_3);
  get("beta_3", c.beta_3);
  get("alpha_4", c.alpha_4);
  get("beta_4", c.beta_4);
}

struct LogDensity {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  bool domain_violation = false;  // a latent stiffness left the surrogate domain
};

namespace detail {

inline double gamma_lpdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

// Stiffness at which the (monotone increasing) surrogate attains the target
// frequency, clamped to the domain when the target lies outside the fitted
// range.  Used to initialise latent stiffnesses at the observations.
inline double invert_surrogate(const Surrogate& s, double target_hz) {
  double lo = s.domain_lo(), hi = s.domain_hi();
  if (s.eval(lo) >= target_hz) return lo;
  if (s.eval(hi) <= target_hz) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (s.eval(mid) < target_hz ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// The partially-pooled model over a whole population.  Unconstrained layout:
//   [log E_mu, log V_mu, log E_sigma, log V_sigma, log gamma,
//    E_s1/scale .. E_sK/scale, log V_s1 .. log V_sK, log s_11 .. log s_KN]
// where scale is the E_mu prior mean, keeping every coordinate O(1).
class HierarchicalModel {
 public:
  HierarchicalModel(const PopulationDataset& data, const Surrogate& surrogate,
                    const HyperPriorConfig& priors)
      : surrogate_(surrogate), priors_(priors) {
    priors.validate();
    if (data.structures.empty())
      throw std::invalid_argument("hierarchical model needs at least one structure");
    for (const auto& s : data.structures) {
      structure_ids_.push_back(s.structure_id);
      std::vector<double> freqs;
      for (const auto& o : s.observations) {
        if (!(o.frequency_hz > 0.0) || !std::isfinite(o.frequency_hz))
          throw std::invalid_argument("non-positive frequency in structure '" + s.structure_id +
                                      "'");
        freqs.push_back(o.frequency_hz);
      }
      omega_.push_back(std::move(freqs));
    }
    scale_ = priors.alpha_0 / priors.beta_0;
    k_ = static_cast<int>(omega_.size());
    s_offset_.resize(omega_.size());
    int off = 5 + 2 * k_;
    for (int k = 0; k < k_; ++k) {
      s_offset_[k] = off;
      off += static_cast<int>(omega_[k].size());
    }
    dim_ = off;
  }

  int dim() const { return dim_; }
  int n_structures() const { return k_; }
  const std::vector<std::string>& structure_ids() const { return structure_ids_; }
  double e_sk_scale() const { return scale_; }

  std::vector<std::string> param_names() const {
    std::vector<std::string> names = {"E_mu", "V_mu", "E_sigma", "V_sigma", "gamma"};
    for (int k = 1; k <= k_; ++k) names.push_back("E_s" + std::to_string(k));
    for (int k = 1; k <= k_; ++k) names.push_back("V_s" + std::to_string(k));
    for (int k = 0; k < k_; ++k)
      for (std::size_t i = 1; i <= omega_[k].size(); ++i)
        names.push_back("s_" + std::to_string(k + 1) + "_" + std::to_string(i));
    return names;
  }

  // Constrained values in the order of param_names().
  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const {
    Eigen::VectorXd c(dim_);
    for (int j = 0; j < 5; ++j) c[j] = std::exp(u[j]);
    for (int k = 0; k < k_; ++k) c[5 + k] = scale_ * u[5 + k];
    for (int j = 5 + k_; j < dim_; ++j) c[j] = std::exp(u[j]);
    return c;
  }

  LogDensity logp(const Eigen::VectorXd& u) const {
    LogDensity out;
    out.grad = Eigen::VectorXd::Zero(dim_);

    const double e_mu = std::exp(u[0]);
    const double v_mu = std::exp(u[1]);
    const double e_sig = std::exp(u[2]);
    const double v_sig = std::exp(u[3]);
    const double gam = std::exp(u[4]);
    if (!std::isfinite(e_mu) || !std::isfinite(v_mu) || !std::isfinite(e_sig) ||
        !std::isfinite(v_sig) || !std::isfinite(gam))
      return out;  // overflowing transform: treat as divergence

    double lp = 0.0;
    // Gamma hyper-priors with log-transform Jacobians: d/du of
    // (gamma_lpdf(exp u) + u) is shape - rate * x.
    const double shapes[5] = {priors_.alpha_0, priors_.alpha_1, priors_.alpha_2, priors_.alpha_3,
                              priors_.alpha_4};
    const double rates[5] = {priors_.beta_0, priors_.beta_1, priors_.beta_2, priors_.beta_3,
                             priors_.beta_4};
    const double pop[5] = {e_mu, v_mu, e_sig, v_sig, gam};
    for (int j = 0; j < 5; ++j) {
      lp += detail::gamma_lpdf(pop[j], shapes[j], rates[j]) + u[j];
      out.grad[j] = shapes[j] - rates[j] * pop[j];
    }

    // V_sk truncation: -log Phi(z) per structure, z = E_sigma / sqrt(V_sigma).
    const double z = e_sig / std::sqrt(v_sig);
    const double hazard = norm_pdf_over_cdf(z);
    lp -= k_ * log_norm_cdf(z);
    out.grad[2] += -k_ * hazard / std::sqrt(v_sig) * e_sig;           // d/du2 via chain rule
    out.grad[3] += k_ * hazard * e_sig / (2.0 * std::sqrt(v_sig));    // z * hazard / 2 in u-space

    // E_sk is sampled as x = E_sk / scale (affine, constant Jacobian).
    lp += k_ * std::log(scale_);
    for (int k = 0; k < k_; ++k) {
      const double e_sk = scale_ * u[5 + k];
      const double v_sk = std::exp(u[5 + k_ + k]);
      if (!std::isfinite(v_sk)) return out;

      // E_sk ~ Normal(E_mu, V_mu)
      const double dmu = e_sk - e_mu;
      lp += -0.5 * std::log(two_pi * v_mu) - dmu * dmu / (2.0 * v_mu);
      out.grad[5 + k] += -dmu / v_mu * scale_;
      out.grad[0] += dmu / v_mu * e_mu;
      out.grad[1] += (-0.5 / v_mu + dmu * dmu / (2.0 * v_mu * v_mu)) * v_mu;

      // V_sk ~ Normal(E_sigma, V_sigma), truncated to (0, inf); Jacobian + u.
      const double dsig = v_sk - e_sig;
      lp += -0.5 * std::log(two_pi * v_sig) - dsig * dsig / (2.0 * v_sig) + u[5 + k_ + k];
      out.grad[5 + k_ + k] += -dsig / v_sig * v_sk + 1.0;
      out.grad[2] += dsig / v_sig * e_sig;
      out.grad[3] += (-0.5 / v_sig + dsig * dsig / (2.0 * v_sig * v_sig)) * v_sig;

      for (std::size_t i = 0; i < omega_[k].size(); ++i) {
        const int js = s_offset_[k] + static_cast<int>(i);
        const double s_ik = std::exp(u[js]);
        if (!std::isfinite(s_ik) || !surrogate_.in_domain(s_ik)) {
          out.grad.setZero();
          out.value = -std::numeric_limits<double>::infinity();
          out.domain_violation = true;
          return out;
        }

        // s_ik ~ Normal(E_sk, V_sk), sampled as log s (Jacobian + u).
        const double ds = s_ik - e_sk;
        lp += -0.5 * std::log(two_pi * v_sk) - ds * ds / (2.0 * v_sk) + u[js];
        out.grad[js] += -ds / v_sk * s_ik + 1.0;
        out.grad[5 + k] += ds / v_sk * scale_;
        out.grad[5 + k_ + k] += (-0.5 / v_sk + ds * ds / (2.0 * v_sk * v_sk)) * v_sk;

        // omega_ik ~ Normal(f(s_ik), gamma)
        const double f = surrogate_.eval(s_ik);
        const double df = surrogate_.eval_grad(s_ik);
        const double r = omega_[k][i] - f;
        lp += -0.5 * std::log(two_pi * gam) - r * r / (2.0 * gam);
        out.grad[js] += r / gam * df * s_ik;
        out.grad[4] += (-0.5 / gam + r * r / (2.0 * gam * gam)) * gam;
      }
    }

    if (!std::isfinite(lp)) {
      out.grad.setZero();
      out.value = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.value = lp;
    return out;
  }

  // Unconstrained start point: population parameters at prior means, E_sk at
  // the E_mu mean, V_sk at the E_sigma mean, s_ik at the surrogate inverse of
  // its observation; jittered per chain in sampling space.
  Eigen::VectorXd initial_point(Rng& rng, double jitter_sd = 0.05) const {
    Eigen::VectorXd u(dim_);
    u[0] = std::log(priors_.alpha_0 / priors_.beta_0);
    u[1] = std::log(priors_.alpha_1 / priors_.beta_1);
    u[2] = std::log(priors_.alpha_2 / priors_.beta_2);
    u[3] = std::log(priors_.alpha_3 / priors_.beta_3);
    u[4] = std::log(priors_.alpha_4 / priors_.beta_4);
    for (int k = 0; k < k_; ++k) {
      u[5 + k] = 1.0;  // E_sk = prior mean of E_mu, in scale units
      u[5 + k_ + k] = u[2];
      for (std::size_t i = 0; i < omega_[k].size(); ++i)
        u[s_offset_[k] + static_cast<int>(i)] =
            std::log(detail::invert_surrogate(surrogate_, omega_[k][i]));
    }
    for (int j = 0; j < dim_; ++j) u[j] += rng.normal(0.0, jitter_sd);
    // Keep jittered stiffnesses strictly inside the domain.
    const double lo = std::log(surrogate_.domain_lo()) + 1e-3;
    const double hi = std::log(surrogate_.domain_hi()) - 1e-3;
    for (int k = 0; k < k_; ++k)
      for (std::size_t i = 0; i < omega_[k].size(); ++i) {
        double& v = u[s_offset_[k] + static_cast<int>(i)];
        v = std::min(std::max(v, lo), hi);
      }
    return u;
  }

  const std::vector<std::vector<double>>& observations() const { return omega_; }

 private:
  Surrogate surrogate_;
  HyperPriorConfig priors_;
  std::vector<std::vector<double>> omega_;
  std::vector<std::string> structure_ids_;
  std::vector<int> s_offset_;
  double scale_ = 1.0;
  int k_ = 0;
  int dim_ = 0;
};

// The no-pooling variant: one structure, its mean and variance drawn directly
// from the corresponding gamma hyper-priors (no population level).  Layout:
//   [log E_s, log V_s, log gamma, log s_1 .. log s_N]
class NoPoolingModel {
 public:
  NoPoolingModel(const PopulationDataset& data, int structure_index, const Surrogate& surrogate,
                 const HyperPriorConfig& priors)
      : surrogate_(surrogate), priors_(priors) {
    priors.validate();
    if (structure_index < 0 || structure_index >= static_cast<int>(data.structures.size()))
      throw std::out_of_range("no-pooling structure index out of range");
    const auto& s = data.structures[static_cast<std::size_t>(structure_index)];
    structure_id_ = s.structure_id;
    for (const auto& o : s.observations) {
      if (!(o.frequency_hz > 0.0) || !std::isfinite(o.frequency_hz))
        throw std::invalid_argument("non-positive frequency in structure '" + s.structure_id +
                                    "'");
      omega_.push_back(o.frequency_hz);
    }
    dim_ = 3 + static_cast<int>(omega_.size());
  }

  int dim() const { return dim_; }
  const std::string& structure_id() const { return structure_id_; }

  std::vector<std::string> param_names() const {
    std::vector<std::string> names = {"E_s1", "V_s1", "gamma"};
    for (std::size_t i = 1; i <= omega_.size(); ++i)
      names.push_back("s_1_" + std::to_string(i));
    return names;
  }

  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const {
    return u.array().exp().matrix();
  }

  LogDensity logp(const Eigen::VectorXd& u) const {
    LogDensity out;
    out.grad = Eigen::VectorXd::Zero(dim_);

    const double e_s = std::exp(u[0]);
    const double v_s = std::exp(u[1]);
    const double gam = std::exp(u[2]);
    if (!std::isfinite(e_s) || !std::isfinite(v_s) || !std::isfinite(gam)) return out;

    double lp = detail::gamma_lpdf(e_s, priors_.alpha_0, priors_.beta_0) + u[0] +
                detail::gamma_lpdf(v_s, priors_.alpha_2, priors_.beta_2) + u[1] +
                detail::gamma_lpdf(gam, priors_.alpha_4, priors_.beta_4) + u[2];
    out.grad[0] = priors_.alpha_0 - priors_.beta_0 * e_s;
    out.grad[1] = priors_.alpha_2 - priors_.beta_2 * v_s;
    out.grad[2] = priors_.alpha_4 - priors_.beta_4 * gam;

    for (std::size_t i = 0; i < omega_.size(); ++i) {
      const int js = 3 + static_cast<int>(i);
      const double s_i = std::exp(u[js]);
      if (!std::isfinite(s_i) || !surrogate_.in_domain(s_i)) {
        out.grad.setZero();
        out.value = -std::numeric_limits<double>::infinity();
        out.domain_violation = true;
        return out;
      }
      const double ds = s_i - e_s;
      lp += -0.5 * std::log(two_pi * v_s) - ds * ds / (2.0 * v_s) + u[js];
      out.grad[js] += -ds / v_s * s_i + 1.0;
      out.grad[0] += ds / v_s * e_s;
      out.grad[1] += (-0.5 / v_s + ds * ds / (2.0 * v_s * v_s)) * v_s;

      const double f = surrogate_.eval(s_i);
      const double df = surrogate_.eval_grad(s_i);
      const double r = omega_[i] - f;
      lp += -0.5 * std::log(two_pi * gam) - r * r / (2.0 * gam);
      out.grad[js] += r / gam * df * s_i;
      out.grad[2] += (-0.5 / gam + r * r / (2.0 * gam * gam)) * gam;
    }

    if (!std::isfinite(lp)) {
      out.grad.setZero();
      out.value = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.value = lp;
    return out;
  }

  Eigen::VectorXd initial_point(Rng& rng, double jitter_sd = 0.05) const {
    Eigen::VectorXd u(dim_);
    u[0] = std::log(priors_.alpha_0 / priors_.beta_0);
    u[1] = std::log(priors_.alpha_2 / priors_.beta_2);
    u[2] = std::log(priors_.alpha_4 / priors_.beta_4);
    for (std::size_t i = 0; i < omega_.size(); ++i)
      u[3 + static_cast<int>(i)] = std::log(detail::invert_surrogate(surrogate_, omega_[i]));
    for (int j = 0; j < dim_; ++j) u[j] += rng.normal(0.0, jitter_sd);
    const double lo = std::log(surrogate_.domain_lo()) + 1e-3;
    const double hi = std::log(surrogate_.domain_hi()) - 1e-3;
    for (std::size_t i = 0; i < omega_.size(); ++i) {
      double& v = u[3 + static_cast<int>(i)];
      v = std::min(std::max(v, lo), hi);
    }
    return u;
  }

 private:
  Surrogate surrogate_;
  HyperPriorConfig priors_;
  std::vector<double> omega_;
  std::string structure_id_;
  int dim_ = 0;
};

}  // namespace pileshm
