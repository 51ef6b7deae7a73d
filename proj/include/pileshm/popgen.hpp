#pragma once

// Synthetic population generation (hierarchical stiffness draws pushed through
// a frequency model and corrupted with Gaussian noise) and ingestion of
// experimental frequency CSVs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pileshm/beam_fem.hpp"
#include "pileshm/io.hpp"
#include "pileshm/rng.hpp"
#include "pileshm/surrogate.hpp"

namespace pileshm {

struct Observation {
  double frequency_hz = 0.0;
  std::optional<double> top_mass_kg;  // experimental metadata, absent for synthetic data
  std::optional<double> scour_mm;
};

struct StructureRecord {
  std::string structure_id;
  std::vector<Observation> observations;
};

struct PopulationDataset {
  std::vector<StructureRecord> structures;

  std::size_t total_observations() const {
    std::size_t n = 0;
    for (const auto& s : structures) n += s.observations.size();
    return n;
  }

  void validate() const {
    if (structures.empty()) throw std::invalid_argument("dataset needs at least one structure");
    for (const auto& s : structures) {
      if (s.structure_id.empty()) throw std::invalid_argument("structure with empty id");
      if (s.observations.empty())
        throw std::invalid_argument("structure '" + s.structure_id + "' has no observations");
      for (const auto& o : s.observations)
        if (!(o.frequency_hz > 0.0) || !std::isfinite(o.frequency_hz))
          throw std::invalid_argument("structure '" + s.structure_id +
                                      "' has a non-positive or non-finite frequency");
    }
  }
};

// Population-level truth plus the per-structure draws realised during
// generation (filled in by generate()).
struct GroundTruth {
  double E_mu = 4.0e6;       // global stiffness expectation, N/m^2
  double V_mu = 1.0e10;      // variance of per-structure means
  double E_sigma = 1.0e10;   // expectation of per-structure variances
  double V_sigma = 4.0e18;   // variance of per-structure variances
  double noise_sd = 1.0e-4;  // Hz, measurement noise on frequencies
  std::vector<double> E_sk;  // realised per-structure means
  std::vector<double> V_sk;  // realised per-structure variances

  void validate() const {
    if (!(V_mu > 0) || !(E_sigma > 0) || !(V_sigma > 0))
      throw std::invalid_argument("ground truth variance-role parameters must be positive");
    if (!(E_mu > 0)) throw std::invalid_argument("ground truth E_mu must be positive");
    if (!(noise_sd >= 0)) throw std::invalid_argument("ground truth noise_sd must be >= 0");
    for (double v : V_sk)
      if (!(v > 0)) throw std::invalid_argument("realised V_sk must be positive");
  }
};

inline void to_json(nlohmann::json& j, const GroundTruth& g) {
  j = {{"E_mu", g.E_mu},       {"V_mu", g.V_mu},           {"E_sigma", g.E_sigma},
       {"V_sigma", g.V_sigma}, {"noise_sd", g.noise_sd},   {"E_sk", g.E_sk},
       {"V_sk", g.V_sk}};
}

inline void from_json(const nlohmann::json& j, GroundTruth& g) {
  g = GroundTruth{};
  if (j.contains("E_mu")) j.at("E_mu").get_to(g.E_mu);
  if (j.contains("V_mu")) j.at("V_mu").get_to(g.V_mu);
  if (j.contains("E_sigma")) j.at("E_sigma").get_to(g.E_sigma);
  if (j.contains("V_sigma")) j.at("V_sigma").get_to(g.V_sigma);
  if (j.contains("noise_sd")) j.at("noise_sd").get_to(g.noise_sd);
  if (j.contains("E_sk")) j.at("E_sk").get_to(g.E_sk);
  if (j.contains("V_sk")) j.at("V_sk").get_to(g.V_sk);
}

// Map from stiffness-per-length to first natural frequency, plus the domain
// generated stiffnesses are rejected to.  Wraps either the surrogate or the
// full FE solve.
struct FrequencyModel {
  std::function<double(double)> eval;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
};

inline FrequencyModel make_frequency_model(const Surrogate& surrogate) {
  return {[surrogate](double k) { return surrogate.eval(k); }, surrogate.domain_lo(),
          surrogate.domain_hi()};
}

inline FrequencyModel make_frequency_model(const StructureTemplate& tpl, double domain_lo,
                                           double domain_hi, const BuildOptions& opt = {}) {
  if (!(domain_lo > 0) || !(domain_hi > domain_lo))
    throw std::invalid_argument("frequency model domain must satisfy 0 < lo < hi");
  return {[tpl, opt](double k) {
            FoundationModel f;
            f.stiffness_per_length = k;
            return first_frequency(tpl, f, opt);
          },
          domain_lo, domain_hi};
}

struct GenerationResult {
  PopulationDataset dataset;
  GroundTruth truth;  // input truth with realised E_sk / V_sk filled in
  std::size_t rejected_draws = 0;
  std::size_t accepted_draws = 0;

  double rejection_rate() const {
    const std::size_t total = rejected_draws + accepted_draws;
    return total == 0 ? 0.0 : static_cast<double>(rejected_draws) / static_cast<double>(total);
  }
};

// Hierarchical generation: per structure draw a mean and variance of local
// stiffness, then per observation a stiffness (rejected to the model domain)
// and a noisy frequency.  Deterministic under the seed; a rejection rate above
// 1% means the truth conflicts with positivity or the model domain and is
// treated as a configuration error rather than silently resampled away.
inline GenerationResult generate(const GroundTruth& truth, const std::vector<int>& n_per,
                                 const FrequencyModel& model, std::uint64_t seed) {
  truth.validate();
  if (n_per.empty()) throw std::invalid_argument("generate: need at least one structure");
  for (int n : n_per)
    if (n < 1) throw std::invalid_argument("generate: every structure needs >= 1 observation");
  if (!model.eval) throw std::invalid_argument("generate: frequency model not set");

  constexpr int max_rejects = 100000;
  GenerationResult result;
  result.truth = truth;
  result.truth.E_sk.clear();
  result.truth.V_sk.clear();
  Rng rng(seed);

  auto draw_until = [&](auto&& accept, double mean, double sd, const char* what) {
    for (int attempt = 0; attempt < max_rejects; ++attempt) {
      const double v = rng.normal(mean, sd);
      if (accept(v)) {
        ++result.accepted_draws;
        return v;
      }
      ++result.rejected_draws;
    }
    throw std::runtime_error(std::string("generate: rejection sampling for ") + what +
                             " failed to accept after 100000 attempts");
  };

  const double sd_mu = std::sqrt(truth.V_mu);
  const double sd_sigma = std::sqrt(truth.V_sigma);
  for (std::size_t k = 0; k < n_per.size(); ++k) {
    const double e_sk =
        draw_until([](double v) { return v > 0.0; }, truth.E_mu, sd_mu, "E_sk");
    const double v_sk =
        draw_until([](double v) { return v > 0.0; }, truth.E_sigma, sd_sigma, "V_sk");
    result.truth.E_sk.push_back(e_sk);
    result.truth.V_sk.push_back(v_sk);

    StructureRecord rec;
    rec.structure_id = "structure_" + std::to_string(k + 1);
    const double sd_sk = std::sqrt(v_sk);
    for (int i = 0; i < n_per[k]; ++i) {
      const double s_ik = draw_until(
          [&](double v) { return v >= model.domain_lo && v <= model.domain_hi; }, e_sk, sd_sk,
          "s_ik");
      Observation obs;
      obs.frequency_hz = model.eval(s_ik) + rng.normal(0.0, truth.noise_sd);
      rec.observations.push_back(obs);
    }
    result.dataset.structures.push_back(std::move(rec));
  }

  result.dataset.validate();
  if (result.rejection_rate() > 0.01)
    throw std::runtime_error(
        "generate: rejection rate " + std::to_string(result.rejection_rate() * 100) +
        "% exceeds 1%; the ground truth conflicts with positivity or the model domain");
  return result;
}

// --- CSV schema -------------------------------------------------------------

inline void write_dataset_csv(const std::string& path, const PopulationDataset& dataset,
                              const io::Metadata& meta) {
  dataset.validate();
  bool any_mass = false, any_scour = false;
  for (const auto& s : dataset.structures)
    for (const auto& o : s.observations) {
      any_mass = any_mass || o.top_mass_kg.has_value();
      any_scour = any_scour || o.scour_mm.has_value();
    }
  std::vector<std::string> columns = {"structure_id", "frequency_hz"};
  if (any_mass) columns.push_back("top_mass_kg");
  if (any_scour) columns.push_back("scour_mm");

  std::vector<std::vector<std::string>> rows;
  for (const auto& s : dataset.structures)
    for (const auto& o : s.observations) {
      std::vector<std::string> row = {s.structure_id, io::format_double(o.frequency_hz)};
      if (any_mass) row.push_back(o.top_mass_kg ? io::format_double(*o.top_mass_kg) : "");
      if (any_scour) row.push_back(o.scour_mm ? io::format_double(*o.scour_mm) : "");
      rows.push_back(std::move(row));
    }
  io::write_csv(path, meta, columns, rows);
}

struct IngestResult {
  PopulationDataset baseline;                 // rows with scour_mm absent or zero
  std::vector<StructureRecord> anomaly_candidates;  // rows with scour_mm > 0, grouped by id
};

// Loads an experimental frequency CSV.  Rows flagged with positive scour depth
// are separated into the anomaly-candidate set instead of the baseline
// population.
inline IngestResult ingest_csv(const std::string& path) {
  const auto table = io::read_csv(path);
  const int id_col = table.column_index("structure_id");
  const int freq_col = table.column_index("frequency_hz");
  if (id_col < 0 || freq_col < 0)
    throw std::runtime_error("dataset CSV must have structure_id and frequency_hz columns: " +
                             path);
  const int mass_col = table.column_index("top_mass_kg");
  const int scour_col = table.column_index("scour_mm");
  if (table.rows.empty()) throw std::runtime_error("dataset CSV has no data rows: " + path);

  IngestResult result;
  auto record_for = [](std::vector<StructureRecord>& list, const std::string& id)
      -> StructureRecord& {
    for (auto& r : list)
      if (r.structure_id == id) return r;
    list.push_back({id, {}});
    return list.back();
  };

  for (const auto& row : table.rows) {
    Observation obs;
    obs.frequency_hz = io::parse_double(row[freq_col], path);
    if (!(obs.frequency_hz > 0.0) || !std::isfinite(obs.frequency_hz))
      throw std::runtime_error("non-positive frequency for structure '" + row[id_col] +
                               "' in " + path);
    if (mass_col >= 0 && !row[mass_col].empty())
      obs.top_mass_kg = io::parse_double(row[mass_col], path);
    if (scour_col >= 0 && !row[scour_col].empty())
      obs.scour_mm = io::parse_double(row[scour_col], path);

    const bool anomalous = obs.scour_mm.has_value() && *obs.scour_mm > 0.0;
    auto& rec = record_for(anomalous ? result.anomaly_candidates : result.baseline.structures,
                           row[id_col]);
    rec.observations.push_back(obs);
  }
  if (result.baseline.structures.empty())
    throw std::runtime_error("dataset CSV contains no baseline (scour-free) rows: " + path);
  result.baseline.validate();
  return result;
}

inline PopulationDataset read_dataset_csv(const std::string& path) {
  auto result = ingest_csv(path);
  // Re-attach anomaly rows: callers wanting the plain dataset get every row.
  for (auto& rec : result.anomaly_candidates) {
    bool merged = false;
    for (auto& base : result.baseline.structures)
      if (base.structure_id == rec.structure_id) {
        base.observations.insert(base.observations.end(), rec.observations.begin(),
                                 rec.observations.end());
        merged = true;
        break;
      }
    if (!merged) result.baseline.structures.push_back(std::move(rec));
  }
  result.baseline.validate();
  return result.baseline;
}

// Sample skewness; the generated-frequency normality sanity check uses it.
inline double sample_skewness(const std::vector<double>& x) {
  if (x.size() < 3) throw std::invalid_argument("skewness needs at least 3 samples");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

}  // namespace pileshm
