#pragma once

// Posterior sampling entry points: runs NUTS chains over the hierarchical or
// no-pooling model in parallel threads, packages draws with sampler
// statistics, and persists chains as CSV + JSON sidecar.

#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pileshm/diagnostics.hpp"
#include "pileshm/hier_model.hpp"
#include "pileshm/io.hpp"
#include "pileshm/nuts.hpp"

namespace pileshm {

enum class PoolingRegime { partial, no_pooling };

inline std::string to_string(PoolingRegime r) {
  return r == PoolingRegime::partial ? "partial_pooling" : "no_pooling";
}

inline PoolingRegime pooling_regime_from_string(const std::string& s) {
  if (s == "partial_pooling") return PoolingRegime::partial;
  if (s == "no_pooling") return PoolingRegime::no_pooling;
  throw std::invalid_argument("unknown pooling regime: " + s);
}

struct PosteriorChains {
  std::vector<std::string> param_names;
  std::vector<std::string> structure_ids;  // order matches E_s1.. parameter numbering
  PoolingRegime regime = PoolingRegime::partial;
  std::size_t warmup_count = 0;  // leading warmup iterations stored per chain
  std::vector<Eigen::MatrixXd> draws;  // per chain: (warmup+draws) x P, constrained values
  std::vector<std::vector<IterationStats>> stats;  // per chain, per iteration
  std::vector<double> step_size;                   // per chain, post-adaptation
  std::vector<std::string> warnings;

  std::size_t n_chains() const { return draws.size(); }

  std::size_t n_post_warmup() const {
    return draws.empty() ? 0 : static_cast<std::size_t>(draws.front().rows()) - warmup_count;
  }

  int param_index(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i)
      if (param_names[i] == name) return static_cast<int>(i);
    throw std::out_of_range("no such parameter in chains: " + name);
  }

  int structure_index(const std::string& structure_id) const {
    for (std::size_t i = 0; i < structure_ids.size(); ++i)
      if (structure_ids[i] == structure_id) return static_cast<int>(i);
    throw std::out_of_range("no such structure in chains: " + structure_id);
  }

  // Post-warmup values of one parameter, one vector per chain.
  std::vector<std::vector<double>> post_warmup(int param) const {
    std::vector<std::vector<double>> out;
    for (const auto& m : draws) {
      std::vector<double> c;
      for (Eigen::Index i = static_cast<Eigen::Index>(warmup_count); i < m.rows(); ++i)
        c.push_back(m(i, param));
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<std::vector<double>> post_warmup(const std::string& name) const {
    return post_warmup(param_index(name));
  }

  std::size_t divergences_post_warmup() const {
    std::size_t n = 0;
    for (const auto& chain : stats)
      for (std::size_t i = warmup_count; i < chain.size(); ++i)
        if (chain[i].divergent) ++n;
    return n;
  }

  double mean(const std::string& name) const {
    const auto chains = post_warmup(name);
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& c : chains)
      for (double v : c) {
        s += v;
        ++n;
      }
    return s / static_cast<double>(n);
  }

  double variance(const std::string& name) const {
    const auto chains = post_warmup(name);
    const double mu = mean(name);
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& c : chains)
      for (double v : c) {
        s += (v - mu) * (v - mu);
        ++n;
      }
    return s / static_cast<double>(n - 1);
  }
};

struct SampleOptions {
  int chains = 4;
  int warmup = 2000;
  int draws = 2000;
  std::uint64_t seed = 0;
  int max_depth = 10;
  double target_accept = 0.8;
  double init_jitter_sd = 0.05;
};

namespace detail {

template <typename Model>
PosteriorChains run_chains(const Model& model, const SampleOptions& opt, PoolingRegime regime,
                           const std::vector<std::string>& structure_ids) {
  if (opt.chains < 1) throw std::invalid_argument("need at least one chain");
  NutsOptions nuts_opt;
  nuts_opt.warmup = opt.warmup;
  nuts_opt.draws = opt.draws;
  nuts_opt.max_depth = opt.max_depth;
  nuts_opt.target_accept = opt.target_accept;

  std::vector<ChainResult> results(static_cast<std::size_t>(opt.chains));
  std::vector<std::string> errors(static_cast<std::size_t>(opt.chains));

  auto run_one = [&](int chain) {
    try {
      Rng rng(opt.seed, static_cast<std::uint64_t>(chain));
      auto target = [&model](const Eigen::VectorXd& u) { return model.logp(u); };
      // A jittered start can land at -inf (e.g. latent stiffness pushed out of
      // domain); retry with fresh jitter before declaring failure.
      Eigen::VectorXd init;
      bool ok = false;
      for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        init = model.initial_point(rng, opt.init_jitter_sd);
        ok = std::isfinite(model.logp(init).value);
      }
      if (!ok)
        throw std::runtime_error("initialization failure: no finite starting point found");
      results[static_cast<std::size_t>(chain)] = nuts_chain(target, init, nuts_opt, rng);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(chain)] = e.what();
    }
  };

  std::vector<std::thread> threads;
  for (int c = 0; c < opt.chains; ++c) threads.emplace_back(run_one, c);
  for (auto& t : threads) t.join();
  for (int c = 0; c < opt.chains; ++c)
    if (!errors[static_cast<std::size_t>(c)].empty())
      throw std::runtime_error("chain " + std::to_string(c + 1) + ": " +
                               errors[static_cast<std::size_t>(c)]);

  PosteriorChains chains;
  chains.param_names = model.param_names();
  chains.structure_ids = structure_ids;
  chains.regime = regime;
  chains.warmup_count = static_cast<std::size_t>(opt.warmup);
  for (auto& r : results) {  // merge in fixed chain order: deterministic output
    Eigen::MatrixXd constrained(r.draws.rows(), r.draws.cols());
    for (Eigen::Index i = 0; i < r.draws.rows(); ++i)
      constrained.row(i) = model.constrain(r.draws.row(i).transpose());
    chains.draws.push_back(std::move(constrained));
    chains.stats.push_back(std::move(r.stats));
    chains.step_size.push_back(r.step_size);
  }

  const std::size_t divergent = chains.divergences_post_warmup();
  const std::size_t total = chains.n_chains() * chains.n_post_warmup();
  if (total > 0 && divergent * 100 > total) {
    chains.warnings.push_back("post-warmup divergences: " + std::to_string(divergent) + " of " +
                              std::to_string(total) +
                              " draws (> 1%); treat posterior summaries with suspicion");
    std::cerr << "warning: " << chains.warnings.back() << "\n";
  }
  return chains;
}

}  // namespace detail

// Partially-pooled posterior over the whole population.
inline PosteriorChains sample_nuts(const PopulationDataset& data, const Surrogate& surrogate,
                                   const HyperPriorConfig& priors, const SampleOptions& opt = {}) {
  HierarchicalModel model(data, surrogate, priors);
  return detail::run_chains(model, opt, PoolingRegime::partial, model.structure_ids());
}

// Independent (no-pooling) posterior for one structure.
inline PosteriorChains fit_no_pooling(const PopulationDataset& data, const Surrogate& surrogate,
                                      const HyperPriorConfig& priors, int structure_index,
                                      const SampleOptions& opt = {}) {
  NoPoolingModel model(data, structure_index, surrogate, priors);
  return detail::run_chains(model, opt, PoolingRegime::no_pooling, {model.structure_id()});
}

// Diagnostics over every parameter; keys are parameter names.
inline std::map<std::string, double> all_rhat(const PosteriorChains& chains) {
  std::map<std::string, double> out;
  for (std::size_t p = 0; p < chains.param_names.size(); ++p)
    out[chains.param_names[p]] = split_rhat(chains.post_warmup(static_cast<int>(p)));
  return out;
}

inline std::map<std::string, double> all_ess(const PosteriorChains& chains) {
  std::map<std::string, double> out;
  for (std::size_t p = 0; p < chains.param_names.size(); ++p)
    out[chains.param_names[p]] = ess_bulk(chains.post_warmup(static_cast<int>(p)));
  return out;
}

// --- persistence ------------------------------------------------------------
// CSV holds the post-warmup draws (chain and iteration are 1-based); the JSON
// sidecar carries sampler metadata and diagnostics.

inline void write_chains_csv(const std::string& csv_path, const std::string& sidecar_path,
                             const PosteriorChains& chains, const io::Metadata& meta) {
  std::vector<std::string> columns = {"chain", "iteration"};
  columns.insert(columns.end(), chains.param_names.begin(), chains.param_names.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t c = 0; c < chains.n_chains(); ++c) {
    const auto& m = chains.draws[c];
    for (Eigen::Index i = static_cast<Eigen::Index>(chains.warmup_count); i < m.rows(); ++i) {
      std::vector<std::string> row = {std::to_string(c + 1),
                                      std::to_string(i - static_cast<Eigen::Index>(
                                                             chains.warmup_count) +
                                                     1)};
      for (Eigen::Index p = 0; p < m.cols(); ++p) row.push_back(io::format_double(m(i, p)));
      rows.push_back(std::move(row));
    }
  }
  io::write_csv(csv_path, meta, columns, rows);

  nlohmann::json sidecar;
  sidecar["version"] = meta.version;
  sidecar["config_hash"] = meta.config_hash;
  sidecar["seed"] = meta.seed;
  sidecar["regime"] = to_string(chains.regime);
  sidecar["warmup_count"] = chains.warmup_count;
  sidecar["n_chains"] = chains.n_chains();
  sidecar["n_draws"] = chains.n_post_warmup();
  sidecar["param_names"] = chains.param_names;
  sidecar["structure_ids"] = chains.structure_ids;
  sidecar["step_size"] = chains.step_size;
  std::vector<std::size_t> div_per_chain;
  std::vector<double> accept_per_chain;
  for (const auto& chain : chains.stats) {
    std::size_t d = 0;
    double a = 0.0;
    std::size_t n = 0;
    for (std::size_t i = chains.warmup_count; i < chain.size(); ++i) {
      if (chain[i].divergent) ++d;
      a += chain[i].accept_stat;
      ++n;
    }
    div_per_chain.push_back(d);
    accept_per_chain.push_back(n ? a / static_cast<double>(n) : 0.0);
  }
  sidecar["divergences"] = div_per_chain;
  sidecar["mean_accept"] = accept_per_chain;
  sidecar["rhat"] = all_rhat(chains);
  sidecar["ess"] = all_ess(chains);
  sidecar["warnings"] = chains.warnings;
  io::write_json(sidecar_path, sidecar);
}

inline PosteriorChains read_chains_csv(const std::string& csv_path,
                                       const std::string& sidecar_path) {
  const auto table = io::read_csv(csv_path);
  const auto sidecar = io::read_json(sidecar_path);

  PosteriorChains chains;
  chains.param_names = sidecar.at("param_names").get<std::vector<std::string>>();
  chains.structure_ids = sidecar.at("structure_ids").get<std::vector<std::string>>();
  chains.regime = pooling_regime_from_string(sidecar.at("regime").get<std::string>());
  chains.step_size = sidecar.at("step_size").get<std::vector<double>>();
  chains.warmup_count = 0;  // the CSV holds post-warmup draws only

  const std::size_t n_chains = sidecar.at("n_chains").get<std::size_t>();
  const std::size_t n_draws = sidecar.at("n_draws").get<std::size_t>();
  const std::size_t n_params = chains.param_names.size();
  if (table.columns.size() != n_params + 2)
    throw std::runtime_error("chains CSV column count does not match sidecar parameters");
  if (table.rows.size() != n_chains * n_draws)
    throw std::runtime_error("chains CSV row count does not match sidecar metadata");

  chains.draws.assign(n_chains,
                      Eigen::MatrixXd(static_cast<Eigen::Index>(n_draws),
                                      static_cast<Eigen::Index>(n_params)));
  chains.stats.assign(n_chains, {});
  for (const auto& row : table.rows) {
    const auto c = static_cast<std::size_t>(io::parse_double(row[0], csv_path)) - 1;
    const auto i = static_cast<std::size_t>(io::parse_double(row[1], csv_path)) - 1;
    if (c >= n_chains || i >= n_draws)
      throw std::runtime_error("chains CSV has out-of-range chain/iteration indices");
    for (std::size_t p = 0; p < n_params; ++p)
      chains.draws[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
          io::parse_double(row[p + 2], csv_path);
  }
  return chains;
}

}  // namespace pileshm
