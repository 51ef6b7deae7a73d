#pragma once

// Polynomial surrogate for the FE map from foundation stiffness to first
// natural frequency.  A quintic in the affinely normalised stiffness is fitted
// by least squares to FE solutions on a log-spaced training grid; sampling the
// posterior then costs a polynomial evaluation instead of an eigensolve.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pileshm/beam_fem.hpp"

namespace pileshm {

class Surrogate {
 public:
  static constexpr int degree = 5;

  Surrogate() = default;

  // coeffs are ascending powers of the normalised coordinate
  // u = (k - center) / half_width, u in [-1, 1] over the domain.
  Surrogate(std::vector<double> coeffs, double domain_lo, double domain_hi)
      : coeffs_(std::move(coeffs)), lo_(domain_lo), hi_(domain_hi) {
    if (coeffs_.size() != degree + 1)
      throw std::invalid_argument("surrogate expects exactly 6 coefficients");
    if (!(lo_ > 0.0) || !(hi_ > lo_))
      throw std::invalid_argument("surrogate domain must satisfy 0 < lo < hi");
  }

  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  bool in_domain(double stiffness) const { return stiffness >= lo_ && stiffness <= hi_; }

  // Frequency (Hz) at a stiffness inside the fitted domain.
  double eval(double stiffness) const {
    check_domain(stiffness);
    const double u = normalise(stiffness);
    // Horner in ascending-coefficient storage.
    double acc = coeffs_[degree];
    for (int p = degree - 1; p >= 0; --p) acc = acc * u + coeffs_[p];
    return acc;
  }

  // d(frequency)/d(stiffness), analytic.
  double eval_grad(double stiffness) const {
    check_domain(stiffness);
    const double u = normalise(stiffness);
    double acc = degree * coeffs_[degree];
    for (int p = degree - 1; p >= 1; --p) acc = acc * u + p * coeffs_[p];
    return acc * (2.0 / (hi_ - lo_));  // chain rule through the normalisation
  }

  nlohmann::json to_json() const {
    return {{"coefficients", coeffs_}, {"domain_lo", lo_}, {"domain_hi", hi_}};
  }

  static Surrogate from_json(const nlohmann::json& j) {
    return Surrogate(j.at("coefficients").get<std::vector<double>>(),
                     j.at("domain_lo").get<double>(), j.at("domain_hi").get<double>());
  }

 private:
  void check_domain(double stiffness) const {
    if (coeffs_.empty()) throw std::logic_error("surrogate has not been fitted");
    if (!in_domain(stiffness))
      throw std::domain_error("stiffness " + std::to_string(stiffness) +
                              " outside surrogate domain [" + std::to_string(lo_) + ", " +
                              std::to_string(hi_) + "]");
  }

  double normalise(double stiffness) const {
    const double center = 0.5 * (lo_ + hi_);
    const double half_width = 0.5 * (hi_ - lo_);
    return (stiffness - center) / half_width;
  }

  std::vector<double> coeffs_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Log-spaced stiffness grid used both for training and for holdout checks.
inline std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log grid needs 0 < lo < hi");
  if (n < 2) throw std::invalid_argument("log grid needs at least 2 points");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// Least-squares quintic through (stiffness, frequency) samples.  Rejects fits
// that are not strictly monotonic over the domain: the inference treats
// frequency as an invertible function of stiffness, so a wiggling fit would
// silently corrupt the posterior.
inline Surrogate fit_surrogate(const std::vector<double>& stiffness,
                               const std::vector<double>& frequency_hz, double domain_lo,
                               double domain_hi) {
  if (stiffness.size() != frequency_hz.size())
    throw std::invalid_argument("stiffness/frequency sample counts differ");
  const int n = static_cast<int>(stiffness.size());
  if (n < Surrogate::degree + 1)
    throw std::invalid_argument("need at least 6 samples to fit a quintic");
  const double center = 0.5 * (domain_lo + domain_hi);
  const double half_width = 0.5 * (domain_hi - domain_lo);
  if (!(domain_lo > 0.0) || !(half_width > 0.0))
    throw std::invalid_argument("surrogate domain must satisfy 0 < lo < hi");

  Eigen::MatrixXd V(n, Surrogate::degree + 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double k = stiffness[i];
    if (k < domain_lo || k > domain_hi)
      throw std::invalid_argument("training sample outside surrogate domain");
    const double u = (k - center) / half_width;
    double up = 1.0;
    for (int p = 0; p <= Surrogate::degree; ++p) {
      V(i, p) = up;
      up *= u;
    }
    y(i) = frequency_hz[i];
  }

  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
  Surrogate fit(std::vector<double>(c.data(), c.data() + c.size()), domain_lo, domain_hi);

  // Monotonicity audit on a dense grid: the derivative must keep one sign.
  constexpr int audit_points = 1000;
  int sign = 0;
  for (int i = 0; i < audit_points; ++i) {
    const double k =
        domain_lo + (domain_hi - domain_lo) * static_cast<double>(i) / (audit_points - 1);
    const double g = fit.eval_grad(k);
    const int s = (g > 0.0) - (g < 0.0);
    if (s == 0) throw std::runtime_error("surrogate fit has a stationary point in the domain");
    if (sign == 0) sign = s;
    if (s != sign)
      throw std::runtime_error("surrogate fit is not monotonic over the requested domain");
  }
  return fit;
}

// End-to-end helper: solve the FE model on a log-spaced stiffness grid and fit
// the quintic to the first natural frequency.
inline Surrogate fit_fe_surrogate(const StructureTemplate& tpl, double domain_lo,
                                  double domain_hi, const BuildOptions& opt = {},
                                  int n_training = 30) {
  const auto grid = log_spaced(domain_lo, domain_hi, n_training);
  std::vector<double> freq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    FoundationModel foundation;
    foundation.stiffness_per_length = grid[i];
    freq[i] = first_frequency(tpl, foundation, opt);
  }
  return fit_surrogate(grid, freq, domain_lo, domain_hi);
}

}  // namespace pileshm
