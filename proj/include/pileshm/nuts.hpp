#pragma once

// From-scratch No-U-Turn sampler: multinomial trajectory sampling, dual
// averaging of the step size toward a 0.8 acceptance target, and windowed
// diagonal mass-matrix adaptation during warmup.  Generic over the target so
// the toy-Gaussian soundness tests exercise exactly the code the hierarchical
// model uses.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pileshm/rng.hpp"

namespace pileshm {

// Targets return the log density, its gradient, and whether the point was
// rejected for leaving a hard domain (treated as a divergence, not an error).
struct TargetDensity {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  bool domain_violation = false;
};

struct NutsOptions {
  int warmup = 2000;
  int draws = 2000;
  int max_depth = 10;
  double target_accept = 0.8;
  double max_energy_error = 1000.0;  // divergence threshold on H - H0
  // Stan-style warmup schedule: fast start, doubling slow windows for the
  // metric, fast tail for the final step-size run.
  int init_buffer = 75;
  int term_buffer = 50;
  int base_window = 25;
};

struct IterationStats {
  int tree_depth = 0;
  int n_leapfrog = 0;
  bool divergent = false;
  double accept_stat = 0.0;
  double logp = 0.0;
};

struct ChainResult {
  Eigen::MatrixXd draws;  // (warmup + draws) x dim, unconstrained space
  std::vector<IterationStats> stats;
  Eigen::VectorXd inv_mass;  // final diagonal inverse metric
  double step_size = 0.0;    // step size used post-warmup
};

namespace detail {

struct DualAveraging {
  double mu = 0.0;
  double log_eps = 0.0;
  double log_eps_bar = 0.0;
  double h_bar = 0.0;
  int m = 0;
  static constexpr double gamma = 0.05;
  static constexpr double t0 = 10.0;
  static constexpr double kappa = 0.75;

  void restart(double eps) {
    mu = std::log(10.0 * eps);
    log_eps = std::log(eps);
    log_eps_bar = 0.0;
    h_bar = 0.0;
    m = 0;
  }

  double update(double accept_prob, double target) {
    ++m;
    h_bar += (target - accept_prob - h_bar) / (m + t0);
    log_eps = mu - std::sqrt(static_cast<double>(m)) / gamma * h_bar;
    const double eta = std::pow(static_cast<double>(m), -kappa);
    log_eps_bar = eta * log_eps + (1.0 - eta) * log_eps_bar;
    return std::exp(log_eps);
  }

  double adapted() const { return std::exp(log_eps_bar); }
};

// Welford accumulator for the diagonal metric over a slow warmup window.
struct RunningVariance {
  Eigen::VectorXd mean, m2;
  long n = 0;

  void reset(int dim) {
    mean = Eigen::VectorXd::Zero(dim);
    m2 = Eigen::VectorXd::Zero(dim);
    n = 0;
  }

  void add(const Eigen::VectorXd& x) {
    ++n;
    const Eigen::VectorXd d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d.cwiseProduct(x - mean);
  }

  // Regularised toward unit scale, as in standard windowed adaptation.
  Eigen::VectorXd regularized() const {
    const double w = static_cast<double>(n) / (n + 5.0);
    Eigen::VectorXd var = m2 / std::max(1.0, static_cast<double>(n - 1));
    return w * var.array() + 1e-3 * (1.0 - w);
  }
};

template <typename Target>
class NutsChain {
 public:
  NutsChain(Target& target, const NutsOptions& opt, Rng& rng, int dim)
      : target_(target), opt_(opt), rng_(rng), dim_(dim) {
    inv_mass_ = Eigen::VectorXd::Ones(dim);
  }

  ChainResult run(const Eigen::VectorXd& init) {
    const int total = opt_.warmup + opt_.draws;
    ChainResult result;
    result.draws.resize(total, dim_);
    result.stats.resize(total);

    q_ = init;
    auto d = target_(q_);
    if (!std::isfinite(d.value))
      throw std::runtime_error("NUTS initialization failure: log density not finite at start");
    logp_ = d.value;
    grad_ = d.grad;

    double eps = find_reasonable_epsilon();
    DualAveraging da;
    da.restart(eps);

    const auto window_ends = slow_window_ends();
    std::size_t next_window = 0;
    RunningVariance welford;
    welford.reset(dim_);
    const int slow_begin = windows_enabled() ? effective_init_buffer() : opt_.warmup;
    const int slow_end = windows_enabled() ? opt_.warmup - effective_term_buffer() : 0;

    for (int iter = 0; iter < total; ++iter) {
      IterationStats stats = transition(eps);
      result.draws.row(iter) = q_;
      stats.logp = logp_;
      result.stats[iter] = stats;

      if (iter < opt_.warmup) {
        eps = da.update(stats.accept_stat, opt_.target_accept);
        const int it1 = iter + 1;  // 1-based position inside warmup
        if (it1 > slow_begin && it1 <= slow_end) {
          welford.add(q_);
          if (next_window < window_ends.size() && it1 == window_ends[next_window]) {
            inv_mass_ = welford.regularized();
            welford.reset(dim_);
            ++next_window;
            eps = find_reasonable_epsilon();
            da.restart(eps);
          }
        }
        if (it1 == opt_.warmup) eps = da.adapted();
      }
    }

    result.inv_mass = inv_mass_;
    result.step_size = eps;
    return result;
  }

 private:
  struct Tree {
    Eigen::VectorXd q_minus, r_minus, grad_minus;
    Eigen::VectorXd q_plus, r_plus, grad_plus;
    Eigen::VectorXd q_sample, grad_sample;
    double logp_sample = 0.0;
    double log_sum_weight = -std::numeric_limits<double>::infinity();
    double sum_metro = 0.0;
    int n_leapfrog = 0;
    bool divergent = false;
    bool turning = false;
  };

  double kinetic(const Eigen::VectorXd& r) const {
    return 0.5 * r.cwiseProduct(r).dot(inv_mass_);
  }

  Eigen::VectorXd sample_momentum() {
    Eigen::VectorXd r(dim_);
    for (int j = 0; j < dim_; ++j) r[j] = rng_.normal() / std::sqrt(inv_mass_[j]);
    return r;
  }

  // One leapfrog step; returns false when the density is -inf (divergence).
  bool leapfrog(Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::VectorXd& grad, double& logp,
                double eps) {
    r += 0.5 * eps * grad;
    q += eps * inv_mass_.cwiseProduct(r);
    auto d = target_(q);
    if (!std::isfinite(d.value)) return false;
    r += 0.5 * eps * d.grad;
    grad = d.grad;
    logp = d.value;
    return true;
  }

  bool uturn(const Eigen::VectorXd& q_plus, const Eigen::VectorXd& q_minus,
             const Eigen::VectorXd& r_plus, const Eigen::VectorXd& r_minus) const {
    const Eigen::VectorXd dq = q_plus - q_minus;
    return dq.dot(inv_mass_.cwiseProduct(r_minus)) < 0.0 ||
           dq.dot(inv_mass_.cwiseProduct(r_plus)) < 0.0;
  }

  static double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  }

  Tree build_tree(int depth, const Eigen::VectorXd& q, const Eigen::VectorXd& r,
                  const Eigen::VectorXd& grad, double logp, int dir, double h0, double eps) {
    Tree tree;
    if (depth == 0) {
      Eigen::VectorXd q1 = q, r1 = r, grad1 = grad;
      double logp1 = logp;
      const bool ok = leapfrog(q1, r1, grad1, logp1, dir * eps);
      tree.n_leapfrog = 1;
      const double h = ok ? (-logp1 + kinetic(r1)) : std::numeric_limits<double>::infinity();
      if (!ok || h - h0 > opt_.max_energy_error || !std::isfinite(h)) {
        tree.divergent = true;
        tree.q_minus = tree.q_plus = q1;
        tree.r_minus = tree.r_plus = r1;
        tree.grad_minus = tree.grad_plus = grad1;
        return tree;
      }
      tree.q_minus = tree.q_plus = tree.q_sample = q1;
      tree.r_minus = tree.r_plus = r1;
      tree.grad_minus = tree.grad_plus = tree.grad_sample = grad1;
      tree.logp_sample = logp1;
      tree.log_sum_weight = h0 - h;
      tree.sum_metro = std::min(1.0, std::exp(h0 - h));
      return tree;
    }

    Tree left = build_tree(depth - 1, q, r, grad, logp, dir, h0, eps);
    if (left.divergent || left.turning) return left;

    const Eigen::VectorXd& qf = (dir == 1) ? left.q_plus : left.q_minus;
    const Eigen::VectorXd& rf = (dir == 1) ? left.r_plus : left.r_minus;
    const Eigen::VectorXd& gf = (dir == 1) ? left.grad_plus : left.grad_minus;
    Tree right = build_tree(depth - 1, qf, rf, gf, left.logp_sample, dir, h0, eps);

    Tree merged;
    merged.n_leapfrog = left.n_leapfrog + right.n_leapfrog;
    merged.sum_metro = left.sum_metro + right.sum_metro;
    merged.divergent = right.divergent;
    merged.turning = right.turning;
    if (dir == 1) {
      merged.q_minus = left.q_minus;
      merged.r_minus = left.r_minus;
      merged.grad_minus = left.grad_minus;
      merged.q_plus = right.q_plus;
      merged.r_plus = right.r_plus;
      merged.grad_plus = right.grad_plus;
    } else {
      merged.q_minus = right.q_minus;
      merged.r_minus = right.r_minus;
      merged.grad_minus = right.grad_minus;
      merged.q_plus = left.q_plus;
      merged.r_plus = left.r_plus;
      merged.grad_plus = left.grad_plus;
    }
    if (merged.divergent || merged.turning) return merged;

    merged.log_sum_weight = log_sum_exp(left.log_sum_weight, right.log_sum_weight);
    // Multinomial sampling within the subtree (unbiased between halves).
    if (rng_.uniform() < std::exp(right.log_sum_weight - merged.log_sum_weight)) {
      merged.q_sample = right.q_sample;
      merged.grad_sample = right.grad_sample;
      merged.logp_sample = right.logp_sample;
    } else {
      merged.q_sample = left.q_sample;
      merged.grad_sample = left.grad_sample;
      merged.logp_sample = left.logp_sample;
    }
    merged.turning = uturn(merged.q_plus, merged.q_minus, merged.r_plus, merged.r_minus);
    return merged;
  }

  IterationStats transition(double eps) {
    IterationStats stats;
    const Eigen::VectorXd r0 = sample_momentum();
    const double h0 = -logp_ + kinetic(r0);

    Eigen::VectorXd q_minus = q_, q_plus = q_;
    Eigen::VectorXd r_minus = r0, r_plus = r0;
    Eigen::VectorXd grad_minus = grad_, grad_plus = grad_;
    Eigen::VectorXd q_sample = q_, grad_sample = grad_;
    double logp_sample = logp_;
    double log_sum_weight = 0.0;  // weight of the initial point: exp(h0 - h0)
    double sum_metro = 0.0;
    int n_leapfrog = 0;

    for (int depth = 0; depth < opt_.max_depth; ++depth) {
      const int dir = (rng_.uniform() < 0.5) ? -1 : 1;
      Tree subtree = (dir == 1)
                         ? build_tree(depth, q_plus, r_plus, grad_plus, logp_sample, 1, h0, eps)
                         : build_tree(depth, q_minus, r_minus, grad_minus, logp_sample, -1, h0,
                                      eps);
      n_leapfrog += subtree.n_leapfrog;
      sum_metro += subtree.sum_metro;
      stats.tree_depth = depth;
      if (subtree.divergent) {
        stats.divergent = true;
        break;
      }
      if (subtree.turning) break;

      // Biased progressive sampling: favour the new half of the trajectory.
      if (rng_.uniform() < std::exp(subtree.log_sum_weight - log_sum_weight)) {
        q_sample = subtree.q_sample;
        grad_sample = subtree.grad_sample;
        logp_sample = subtree.logp_sample;
      }
      log_sum_weight = log_sum_exp(log_sum_weight, subtree.log_sum_weight);

      if (dir == 1) {
        q_plus = subtree.q_plus;
        r_plus = subtree.r_plus;
        grad_plus = subtree.grad_plus;
      } else {
        q_minus = subtree.q_minus;
        r_minus = subtree.r_minus;
        grad_minus = subtree.grad_minus;
      }
      if (uturn(q_plus, q_minus, r_plus, r_minus)) break;
    }

    q_ = q_sample;
    grad_ = grad_sample;
    logp_ = logp_sample;
    stats.n_leapfrog = n_leapfrog;
    stats.accept_stat = (n_leapfrog > 0) ? sum_metro / n_leapfrog : 0.0;
    return stats;
  }

  // Hoffman-Gelman heuristic: scale the step until a single leapfrog step's
  // acceptance ratio crosses 1/2.
  double find_reasonable_epsilon() {
    double eps = 1.0;
    const Eigen::VectorXd r0 = sample_momentum();
    const double h0 = -logp_ + kinetic(r0);

    auto step_h = [&](double e) {
      Eigen::VectorXd q = q_, r = r0, grad = grad_;
      double logp = logp_;
      if (!leapfrog(q, r, grad, logp, e)) return std::numeric_limits<double>::infinity();
      return -logp + kinetic(r);
    };

    double ratio = std::exp(h0 - step_h(eps));
    const double dir = (std::isfinite(ratio) && ratio > 0.5) ? 1.0 : -1.0;
    for (int it = 0; it < 100; ++it) {
      if (dir > 0 ? (ratio <= 0.5) : (ratio >= 0.5)) break;
      eps *= (dir > 0) ? 2.0 : 0.5;
      if (eps > 1e7 || eps < 1e-10)
        throw std::runtime_error("NUTS failed to find a workable initial step size");
      ratio = std::exp(h0 - step_h(eps));
      if (!std::isfinite(ratio)) ratio = 0.0;
    }
    return eps;
  }

  bool windows_enabled() const {
    return opt_.warmup >= 20;  // too short for any metric adaptation otherwise
  }

  int effective_init_buffer() const {
    if (opt_.init_buffer + opt_.term_buffer + opt_.base_window <= opt_.warmup)
      return opt_.init_buffer;
    return std::max(1, static_cast<int>(0.15 * opt_.warmup));
  }

  int effective_term_buffer() const {
    if (opt_.init_buffer + opt_.term_buffer + opt_.base_window <= opt_.warmup)
      return opt_.term_buffer;
    return std::max(1, static_cast<int>(0.10 * opt_.warmup));
  }

  // 1-based warmup iteration indices at which the metric is refreshed.
  std::vector<int> slow_window_ends() const {
    std::vector<int> ends;
    if (!windows_enabled()) return ends;
    const int init = effective_init_buffer();
    const int term = effective_term_buffer();
    const int last = opt_.warmup - term;
    int start = init;
    int size = std::max(1, std::min(opt_.base_window, last - init));
    while (start < last) {
      int end = start + size;
      if (end + 2 * size > last) end = last;  // absorb the remainder
      ends.push_back(end);
      start = end;
      size *= 2;
    }
    return ends;
  }

  Target& target_;
  const NutsOptions& opt_;
  Rng& rng_;
  int dim_;
  Eigen::VectorXd inv_mass_;
  Eigen::VectorXd q_, grad_;
  double logp_ = 0.0;
};

}  // namespace detail

// Run one NUTS chain from `init` (unconstrained space).  `target` is any
// callable returning TargetDensity-compatible (value, grad, domain flag).
template <typename Target>
ChainResult nuts_chain(Target&& target, const Eigen::VectorXd& init, const NutsOptions& opt,
                       Rng& rng) {
  if (opt.warmup < 0 || opt.draws < 1)
    throw std::invalid_argument("NUTS needs warmup >= 0 and draws >= 1");
  if (opt.max_depth < 1 || opt.max_depth > 14)
    throw std::invalid_argument("NUTS max depth must be in [1, 14]");
  detail::NutsChain<std::remove_reference_t<Target>> chain(target, opt, rng,
                                                           static_cast<int>(init.size()));
  return chain.run(init);
}

}  // namespace pileshm
