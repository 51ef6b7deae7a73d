#pragma once

// Convergence diagnostics: rank-normalized split R-hat and bulk effective
// sample size, computed per scalar parameter over post-warmup draws.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pileshm/common.hpp"

namespace pileshm {

namespace detail {

// Split every chain into halves (dropping the middle draw of odd-length
// chains) so stationarity violations inside a chain show up as disagreement.
inline std::vector<std::vector<double>> split_chains(
    const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.end() - half, c.end());
  }
  return out;
}

// Pooled average ranks mapped through the normal quantile function with the
// standard continuity correction (r - 3/8) / (S + 1/4).
inline std::vector<std::vector<double>> rank_normalize(
    const std::vector<std::vector<double>>& chains) {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.size();
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  for (std::size_t j = 0; j < chains.size(); ++j)
    for (std::size_t i = 0; i < chains[j].size(); ++i)
      pooled.emplace_back(chains[j][i], j * (total + 1) + i);  // unique back-reference
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> rank_of(total);
  std::size_t pos = 0;
  std::vector<std::size_t> chain_start(chains.size());
  for (std::size_t j = 0, acc = 0; j < chains.size(); ++j) {
    chain_start[j] = acc;
    acc += chains[j].size();
  }
  while (pos < pooled.size()) {
    std::size_t end = pos;
    while (end < pooled.size() && pooled[end].first == pooled[pos].first) ++end;
    const double avg_rank = 0.5 * static_cast<double>(pos + 1 + end);  // ties: average rank
    for (std::size_t i = pos; i < end; ++i) {
      const std::size_t j = pooled[i].second / (total + 1);
      const std::size_t k = pooled[i].second % (total + 1);
      rank_of[chain_start[j] + k] = avg_rank;
    }
    pos = end;
  }

  std::vector<std::vector<double>> z(chains.size());
  const double denom = static_cast<double>(total) + 0.25;
  for (std::size_t j = 0; j < chains.size(); ++j) {
    z[j].resize(chains[j].size());
    for (std::size_t i = 0; i < chains[j].size(); ++i)
      z[j][i] = norm_inv_cdf((rank_of[chain_start[j] + i] - 0.375) / denom);
  }
  return z;
}

inline void check_chains(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("diagnostics need at least 2 chains");
  const std::size_t n = chains.front().size();
  if (n < 4) throw std::invalid_argument("diagnostics need at least 4 draws per chain");
  for (const auto& c : chains)
    if (c.size() != n) throw std::invalid_argument("diagnostics need equal-length chains");
  const double first = chains.front().front();
  bool constant = true;
  for (const auto& c : chains)
    for (double v : c)
      if (v != first) {
        constant = false;
        break;
      }
  if (constant)
    throw std::runtime_error("R-hat undefined: all chains are constant at a single value");
}

// Classic split-R-hat on (already transformed) chains.
inline double basic_rhat(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  std::vector<double> means(m), vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (double v : chains[j]) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : chains[j]) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    means[j] = mean;
    vars[j] = var;
  }
  double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m);
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(m);
  if (w <= 0.0) throw std::runtime_error("R-hat undefined: zero within-chain variance");
  const double var_plus =
      (static_cast<double>(n - 1) / static_cast<double>(n)) * w + b / static_cast<double>(n);
  return std::sqrt(var_plus / w);
}

}  // namespace detail

// Rank-normalized split R-hat over one parameter's post-warmup chains.
inline double split_rhat(const std::vector<std::vector<double>>& chains) {
  detail::check_chains(chains);
  const auto split = detail::split_chains(chains);
  return detail::basic_rhat(detail::rank_normalize(split));
}

// Bulk effective sample size: rank-normalized split chains, combined
// autocorrelation with Geyer's initial monotone positive-pair truncation.
inline double ess_bulk(const std::vector<std::vector<double>>& chains) {
  detail::check_chains(chains);
  const auto z = detail::rank_normalize(detail::split_chains(chains));
  const std::size_t m = z.size();
  const std::size_t n = z.front().size();

  // Per-chain autocovariances (divisor n) by direct summation: deterministic
  // and cheap at these chain lengths.
  std::vector<std::vector<double>> acov(m, std::vector<double>(n, 0.0));
  std::vector<double> chain_means(m), chain_vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (double v : z[j]) mean += v;
    mean /= static_cast<double>(n);
    chain_means[j] = mean;
    for (std::size_t t = 0; t < n; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i + t < n; ++i) s += (z[j][i] - mean) * (z[j][i + t] - mean);
      acov[j][t] = s / static_cast<double>(n);
    }
    chain_vars[j] = acov[j][0] * static_cast<double>(n) / static_cast<double>(n - 1);
  }

  const double mean_var =
      std::accumulate(chain_vars.begin(), chain_vars.end(), 0.0) / static_cast<double>(m);
  double var_plus = mean_var * static_cast<double>(n - 1) / static_cast<double>(n);
  if (m > 1) {
    double grand =
        std::accumulate(chain_means.begin(), chain_means.end(), 0.0) / static_cast<double>(m);
    double b = 0.0;
    for (double mu : chain_means) b += (mu - grand) * (mu - grand);
    var_plus += b / static_cast<double>(m - 1);
  }
  if (var_plus <= 0.0) throw std::runtime_error("ESS undefined: zero pooled variance");

  auto mean_acov = [&](std::size_t t) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += acov[j][t];
    return s / static_cast<double>(m);
  };

  // Combined autocorrelations rho_t; sum Geyer pairs while positive, then
  // enforce monotone non-increase.
  std::vector<double> rho(n, 0.0);
  rho[0] = 1.0;
  double rho_even = 1.0;
  double rho_odd = 1.0 - (mean_var - mean_acov(1)) / var_plus;
  rho[1] = rho_odd;
  std::size_t t = 1;
  while (t + 2 < n && rho_even + rho_odd > 0.0) {
    rho_even = 1.0 - (mean_var - mean_acov(t + 1)) / var_plus;
    rho_odd = 1.0 - (mean_var - mean_acov(t + 2)) / var_plus;
    if (rho_even + rho_odd >= 0.0) {
      rho[t + 1] = rho_even;
      rho[t + 2] = rho_odd;
    }
    t += 2;
  }
  const std::size_t max_t = t;

  for (std::size_t k = 3; k + 2 <= max_t; k += 2)
    if (rho[k + 1] + rho[k + 2] > rho[k - 1] + rho[k]) {
      rho[k + 1] = (rho[k - 1] + rho[k]) / 2.0;
      rho[k + 2] = rho[k + 1];
    }

  double tau = -1.0;
  for (std::size_t k = 0; k <= max_t && k < n; ++k) tau += 2.0 * rho[k];
  tau = std::max(tau, 1.0 / std::log10(static_cast<double>(m * n)));

  const double s_total = static_cast<double>(m * n);
  double ess = s_total / tau;
  return std::min(ess, s_total * std::log10(s_total));  // cap for antithetic chains
}

}  // namespace pileshm
