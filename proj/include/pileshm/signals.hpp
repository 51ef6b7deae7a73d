#pragma once

// Wave-tank signal chain: JONSWAP spectrum, synthetic wave-excited response
// generation, and the measurement pipeline (zero-phase Butterworth band-pass,
// block-averaged Hann-windowed PSD, peak picking) that turns a displacement
// record into a natural-frequency estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>
#include <json.hpp>

#include "pileshm/common.hpp"
#include "pileshm/io.hpp"
#include "pileshm/rng.hpp"

namespace pileshm {

struct JonswapConfig {
  double alpha = 0.0081;      // intensity (Phillips constant)
  double peak_freq_hz = 0.7;  // spectral peak, stored in Hz
  double gamma_peak = 2.0;    // peak-enhancement factor
  double sigma_a = 0.07;      // spectral width below the peak
  double sigma_b = 0.09;      // spectral width above the peak
  double g = 9.81;            // m/s^2
  double band_lo_hz = 0.2;    // truncation band: density is zero outside
  double band_hi_hz = 3.0;

  void validate() const {
    if (!(alpha > 0)) throw std::invalid_argument("jonswap: alpha must be positive");
    if (!(peak_freq_hz > 0)) throw std::invalid_argument("jonswap: peak frequency must be positive");
    if (!(gamma_peak > 0)) throw std::invalid_argument("jonswap: gamma must be positive");
    if (!(sigma_a > 0) || !(sigma_b > 0))
      throw std::invalid_argument("jonswap: sigma constants must be positive");
    if (!(g > 0)) throw std::invalid_argument("jonswap: g must be positive");
    if (!(band_lo_hz > 0) || !(band_hi_hz > band_lo_hz))
      throw std::invalid_argument("jonswap: truncation band must satisfy 0 < lo < hi");
    if (!(band_lo_hz < peak_freq_hz && peak_freq_hz < band_hi_hz))
      throw std::invalid_argument("jonswap: peak frequency must lie inside the truncation band");
  }
};

inline void to_json(nlohmann::json& j, const JonswapConfig& c) {
  j = {{"alpha", c.alpha},         {"peak_freq_hz", c.peak_freq_hz},
       {"gamma_peak", c.gamma_peak}, {"sigma_a", c.sigma_a},
       {"sigma_b", c.sigma_b},     {"g", c.g},
       {"band_lo_hz", c.band_lo_hz}, {"band_hi_hz", c.band_hi_hz}};
}

inline void from_json(const nlohmann::json& j, JonswapConfig& c) {
  c = JonswapConfig{};
  if (j.contains("alpha")) j.at("alpha").get_to(c.alpha);
  if (j.contains("peak_freq_hz")) j.at("peak_freq_hz").get_to(c.peak_freq_hz);
  if (j.contains("gamma_peak")) j.at("gamma_peak").get_to(c.gamma_peak);
  if (j.contains("sigma_a")) j.at("sigma_a").get_to(c.sigma_a);
  if (j.contains("sigma_b")) j.at("sigma_b").get_to(c.sigma_b);
  if (j.contains("g")) j.at("g").get_to(c.g);
  if (j.contains("band_lo_hz")) j.at("band_lo_hz").get_to(c.band_lo_hz);
  if (j.contains("band_hi_hz")) j.at("band_hi_hz").get_to(c.band_hi_hz);
}

// Spectral density at angular frequency omega (rad/s).  Zero outside the
// truncation band, exact JONSWAP form inside.
inline double jonswap_density(const JonswapConfig& cfg, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("jonswap density requires omega > 0");
  const double omega_p = two_pi * cfg.peak_freq_hz;
  if (omega < two_pi * cfg.band_lo_hz || omega > two_pi * cfg.band_hi_hz) return 0.0;
  const double sigma = (omega <= omega_p) ? cfg.sigma_a : cfg.sigma_b;
  const double d = (omega - omega_p) / (sigma * omega_p);
  const double r = std::exp(-0.5 * d * d);
  const double ratio = omega_p / omega;
  const double ratio4 = ratio * ratio * ratio * ratio;
  return cfg.alpha * cfg.g * cfg.g / std::pow(omega, 5) * std::exp(-1.25 * ratio4) *
         std::pow(cfg.gamma_peak, r);
}

struct TimeSeries {
  double sample_rate = 0.0;  // Hz
  std::vector<double> samples;

  void validate() const {
    if (!(sample_rate > 0)) throw std::invalid_argument("time series needs sample_rate > 0");
    for (double v : samples)
      if (!std::isfinite(v)) throw std::invalid_argument("time series contains non-finite samples");
  }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

namespace detail {

// FFTW planning is not thread-safe; execution of a fresh plan on its own
// arrays is.  All plans here use FFTW_ESTIMATE under a global mutex.
inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

inline std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Inverse of rfft with FFTW's unnormalised convention divided by n, so
// irfft(rfft(x)) == x.
inline std::vector<double> irfft(std::vector<std::complex<double>> spectrum, int n) {
  if (static_cast<int>(spectrum.size()) != n / 2 + 1)
    throw std::invalid_argument("irfft: spectrum length must be n/2 + 1");
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);  // destroys `spectrum`, which is our private copy
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / n;
  for (double& v : out) v *= scale;
  return out;
}

inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1)));
  return w;
}

// One-sided, window-power-corrected PSD of an already-windowed block, zero
// padded to nfft.  Normalisation 2/(fs * sum(w^2)) (half weight at DC and
// Nyquist) makes sum(psd) * df equal the window-corrected block power, which
// is what the Parseval check asserts.
inline std::vector<double> one_sided_psd(const std::vector<double>& windowed, double fs,
                                         std::size_t nfft, double window_power) {
  if (nfft < windowed.size()) throw std::invalid_argument("psd: nfft smaller than block");
  std::vector<double> padded(windowed);
  padded.resize(nfft, 0.0);
  const auto spec = rfft(padded);
  std::vector<double> psd(spec.size());
  const double norm = 2.0 / (fs * window_power);
  for (std::size_t j = 0; j < spec.size(); ++j) psd[j] = norm * std::norm(spec[j]);
  psd.front() *= 0.5;
  if (nfft % 2 == 0) psd.back() *= 0.5;
  return psd;
}

// One second-order section, direct form II transposed, a0 normalised to 1.
struct Biquad {
  double b0, b1, b2, a1, a2;
};

// Order-4 Butterworth band-pass as a cascade of two biquads: order-2 analog
// low-pass prototype, low-pass-to-band-pass transform (which doubles the
// order), bilinear transform with frequency prewarping.
inline std::array<Biquad, 2> butter_bandpass_sos(double f_lo, double f_hi, double fs) {
  if (!(f_lo > 0 && f_hi > f_lo && f_hi < 0.5 * fs))
    throw std::invalid_argument("band-pass corners must satisfy 0 < lo < hi < Nyquist");
  using cplx = std::complex<double>;
  const double fs2 = 2.0 * fs;
  // Prewarped analog corner frequencies.
  const double w1 = fs2 * std::tan(pi * f_lo / fs);
  const double w2 = fs2 * std::tan(pi * f_hi / fs);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;

  // Order-2 Butterworth prototype poles on the unit circle.
  const std::array<cplx, 2> proto = {cplx(-std::sqrt(0.5), std::sqrt(0.5)),
                                     cplx(-std::sqrt(0.5), -std::sqrt(0.5))};
  // Low-pass to band-pass: each prototype pole p maps to the two roots of
  // s^2 - p*bw*s + w0^2 = 0.  Zeros: 2 at s=0, 2 at infinity; gain bw^2.
  std::vector<cplx> poles;
  for (const cplx& p : proto) {
    const cplx disc = std::sqrt(p * p * bw * bw * 0.25 - w0 * w0);
    poles.push_back(p * bw * 0.5 + disc);
    poles.push_back(p * bw * 0.5 - disc);
  }

  // Bilinear transform s -> 2 fs (z-1)/(z+1).  Analog zeros at s=0 map to
  // z=+1; the two zeros at infinity map to z=-1.
  std::vector<cplx> zp(4);
  cplx denom_prod = 1.0;
  for (int i = 0; i < 4; ++i) {
    zp[i] = (fs2 + poles[i]) / (fs2 - poles[i]);
    denom_prod *= (fs2 - poles[i]);
  }
  // H(s) = bw^2 s^2 / prod(s - p):  numerator contributes (2 fs)^2 (z-1)^2,
  // so the digital gain is bw^2 (2 fs)^2 / prod(2 fs - p).
  const double k_digital = (bw * bw * fs2 * fs2 / denom_prod).real();

  // Pair conjugate digital poles into sections (proto[0] yields poles[0..1]
  // and proto[1] = conj(proto[0]) their conjugates in the same order, so zp[0]
  // pairs with zp[2] and zp[1] with zp[3]).  Zeros go to the nearest pole
  // pair: the pair closer to z=+1 carries the two DC zeros (z-1)^2, the other
  // the two Nyquist zeros (z+1)^2.  Sections run with the poles closest to
  // the unit circle last and the overall gain on the first section -- the
  // conventional ordering, which also keeps the steady-state initialisation
  // in sosfiltfilt well scaled (a DC-zero section first would zero the
  // cumulative gain).
  const std::array<std::pair<cplx, cplx>, 2> pairs = {std::make_pair(zp[0], zp[2]),
                                                      std::make_pair(zp[1], zp[3])};
  const int near = (std::abs(pairs[0].first - 1.0) <= std::abs(pairs[1].first - 1.0)) ? 0 : 1;
  struct SectionSpec {
    cplx p1, p2;
    double zero;  // both section zeros sit at this point on the real axis
  };
  std::array<SectionSpec, 2> specs = {
      SectionSpec{pairs[1 - near].first, pairs[1 - near].second, -1.0},
      SectionSpec{pairs[near].first, pairs[near].second, +1.0}};
  if (std::abs(specs[0].p1) > std::abs(specs[1].p1)) std::swap(specs[0], specs[1]);

  std::array<Biquad, 2> sos{};
  for (int s = 0; s < 2; ++s) {
    const cplx sum = specs[s].p1 + specs[s].p2;
    const cplx prod = specs[s].p1 * specs[s].p2;
    const double gain = (s == 0) ? k_digital : 1.0;
    sos[s].b0 = gain;                          // gain * (z - z0)^2
    sos[s].b1 = -2.0 * specs[s].zero * gain;
    sos[s].b2 = specs[s].zero * specs[s].zero * gain;
    sos[s].a1 = -sum.real();  // denominator z^2 - (p + p~) z + p p~
    sos[s].a2 = prod.real();
  }
  return sos;
}

// Steady-state initial conditions for a cascade (sosfilt_zi): per section the
// order-2 lfilter_zi solve, with the cumulative DC gain of earlier sections
// folded in so one scalar (the first input sample) scales the whole state.
inline std::array<std::array<double, 2>, 2> sos_steady_state(const std::array<Biquad, 2>& sos) {
  std::array<std::array<double, 2>, 2> zi{};
  double scale = 1.0;
  for (int s = 0; s < 2; ++s) {
    const Biquad& q = sos[s];
    // Solve (I - A^T) z = B for the DF2T state with unit step input:
    // [1+a1  -1] [z0]   [b1 - a1 b0]
    // [ a2    1] [z1] = [b2 - a2 b0]
    const double a11 = 1.0 + q.a1, a12 = -1.0, a21 = q.a2, a22 = 1.0;
    const double r0 = q.b1 - q.a1 * q.b0, r1 = q.b2 - q.a2 * q.b0;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) throw std::runtime_error("degenerate filter section in steady-state solve");
    zi[s][0] = scale * (r0 * a22 - a12 * r1) / det;
    zi[s][1] = scale * (a11 * r1 - r0 * a21) / det;
    scale *= (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);  // section DC gain
  }
  return zi;
}

inline void sosfilt_inplace(const std::array<Biquad, 2>& sos, std::vector<double>& x,
                            std::array<std::array<double, 2>, 2> zi) {
  for (int s = 0; s < 2; ++s) {
    const Biquad& q = sos[s];
    double z0 = zi[s][0], z1 = zi[s][1];
    for (double& v : x) {
      const double in = v;
      const double out = q.b0 * in + z0;
      z0 = q.b1 * in - q.a1 * out + z1;
      z1 = q.b2 * in - q.a2 * out;
      v = out;
    }
  }
}

// Forward-backward (zero-phase) application with odd-reflection end padding
// and steady-state initial conditions, so the peak location is unbiased by
// the filter's phase and transients don't leak into the estimate.
inline std::vector<double> sosfiltfilt(const std::array<Biquad, 2>& sos,
                                       const std::vector<double>& x) {
  const std::size_t npad = 3 * (2 * sos.size() + 1);
  if (x.size() <= npad)
    throw std::invalid_argument("signal too short for zero-phase filtering");
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * npad);
  for (std::size_t i = npad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 2; i <= npad + 1; ++i) ext.push_back(2.0 * x.back() - x[n - i]);

  const auto zi = sos_steady_state(sos);
  auto scaled = [&](double v) {
    auto z = zi;
    for (auto& section : z)
      for (double& s : section) s *= v;
    return z;
  };

  sosfilt_inplace(sos, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());
  sosfilt_inplace(sos, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());
  return std::vector<double>(ext.begin() + npad, ext.begin() + npad + n);
}

}  // namespace detail

// Synthetic wave-excited displacement response: sum-of-cosines forcing with
// JONSWAP amplitudes sqrt(2 S(w_j) dw) and uniform random phases, passed
// through a single-DOF resonator at the modal frequency.  Stands in for the
// wave tank; deterministic under the seed.
inline TimeSeries synthesize_response(const JonswapConfig& cfg, double modal_freq_hz,
                                      double damping_ratio = 0.01, double duration_s = 1200.0,
                                      double sample_rate = 2048.0, std::uint64_t seed = 0) {
  cfg.validate();
  if (!(sample_rate > 0)) throw std::invalid_argument("sample rate must be positive");
  if (!(modal_freq_hz > 0) || modal_freq_hz >= 0.5 * sample_rate)
    throw std::invalid_argument("modal frequency must lie below Nyquist");
  if (!(damping_ratio > 0)) throw std::invalid_argument("damping ratio must be positive");
  if (duration_s < 1200.0)
    throw std::invalid_argument("duration must be at least 1200 s (20-minute minimum record)");

  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  const double df = sample_rate / static_cast<double>(n);
  const double omega_n = two_pi * modal_freq_hz;

  Rng rng(seed);
  std::vector<std::complex<double>> spec(n / 2 + 1, {0.0, 0.0});
  for (std::size_t j = 1; j < spec.size(); ++j) {
    const double omega = two_pi * df * static_cast<double>(j);
    const double s = jonswap_density(cfg, omega);
    const double phase = rng.uniform(0.0, two_pi);  // drawn for every bin: keeps the
                                                    // stream layout independent of the band
    if (s == 0.0) continue;
    const double amplitude = std::sqrt(2.0 * s * two_pi * df);
    // irfft convention: coefficient A/2 * e^{i phi} contributes A cos(w t + phi).
    std::complex<double> coeff = 0.5 * amplitude * std::exp(std::complex<double>(0.0, phase));
    const std::complex<double> h =
        1.0 / std::complex<double>(omega_n * omega_n - omega * omega,
                                   2.0 * damping_ratio * omega_n * omega);
    spec[j] = coeff * h * static_cast<double>(n);
  }

  TimeSeries ts;
  ts.sample_rate = sample_rate;
  ts.samples = detail::irfft(std::move(spec), static_cast<int>(n));
  return ts;
}

struct PeakEstimate {
  double frequency_hz = 0.0;
  double prominence = 0.0;  // peak PSD / median PSD inside the search band
  bool reliable = false;    // prominence above threshold
};

struct PeakOptions {
  double block_seconds = 60.0;
  double overlap = 0.5;
  double pad_seconds = 500.0;  // zero-pad target; 0.002 Hz resolution at 2048 Hz blocks
  double filter_lo_hz = 0.1;
  double filter_hi_hz = 20.0;
  double search_lo_hz = 0.2;
  double search_hi_hz = 3.0;
  double prominence_threshold = 10.0;
};

// Averaged one-sided PSD over 50%-overlapping Hann-windowed blocks of the
// band-passed signal; returns (frequency grid, PSD).  Split out so the CLI
// can dump the curve for plotting.
inline std::pair<std::vector<double>, std::vector<double>> averaged_psd(
    const TimeSeries& ts, const PeakOptions& opt = {}) {
  ts.validate();
  const double fs = ts.sample_rate;
  const auto block_n = static_cast<std::size_t>(std::llround(opt.block_seconds * fs));
  const auto hop = static_cast<std::size_t>(
      std::llround(opt.block_seconds * (1.0 - opt.overlap) * fs));
  const auto nfft = static_cast<std::size_t>(std::llround(opt.pad_seconds * fs));
  if (block_n < 8 || hop == 0 || nfft < block_n)
    throw std::invalid_argument("invalid PSD block configuration");
  if (ts.samples.size() < block_n + hop)
    throw std::invalid_argument("signal shorter than two overlapping blocks");
  if (std::all_of(ts.samples.begin(), ts.samples.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("all-zero signal has no spectral peak");

  const auto filtered =
      detail::sosfiltfilt(detail::butter_bandpass_sos(opt.filter_lo_hz, opt.filter_hi_hz, fs),
                          ts.samples);

  const auto window = detail::hann_window(block_n);
  double window_power = 0.0;
  for (double w : window) window_power += w * w;

  const std::size_t n_blocks = (filtered.size() - block_n) / hop + 1;
  std::vector<double> mean_psd(nfft / 2 + 1, 0.0);
  std::vector<double> block(block_n);
  for (std::size_t b = 0; b < n_blocks; ++b) {  // fixed order: deterministic average
    const std::size_t off = b * hop;
    for (std::size_t i = 0; i < block_n; ++i) block[i] = filtered[off + i] * window[i];
    const auto psd = detail::one_sided_psd(block, fs, nfft, window_power);
    for (std::size_t j = 0; j < psd.size(); ++j) mean_psd[j] += psd[j];
  }
  for (double& v : mean_psd) v /= static_cast<double>(n_blocks);

  std::vector<double> freqs(mean_psd.size());
  const double df = fs / static_cast<double>(nfft);
  for (std::size_t j = 0; j < freqs.size(); ++j) freqs[j] = df * static_cast<double>(j);
  return {std::move(freqs), std::move(mean_psd)};
}

// Peak of the averaged PSD inside the search band; this is the natural
// frequency estimate the inference consumes.
inline PeakEstimate estimate_peak_frequency(const TimeSeries& ts, const PeakOptions& opt = {}) {
  const auto [freqs, psd] = averaged_psd(ts, opt);
  std::vector<double> band_vals;
  std::size_t best = 0;
  bool found = false;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    if (freqs[j] < opt.search_lo_hz || freqs[j] > opt.search_hi_hz) continue;
    band_vals.push_back(psd[j]);
    if (!found || psd[j] > psd[best]) {
      best = j;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("search band contains no PSD bins");

  std::nth_element(band_vals.begin(), band_vals.begin() + band_vals.size() / 2, band_vals.end());
  const double median = band_vals[band_vals.size() / 2];

  PeakEstimate est;
  est.frequency_hz = freqs[best];
  est.prominence = (median > 0.0) ? psd[best] / median
                                  : std::numeric_limits<double>::infinity();
  est.reliable = est.prominence >= opt.prominence_threshold;
  return est;
}

// --- persistence ------------------------------------------------------------

inline void write_timeseries_csv(const std::string& path, const TimeSeries& ts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write time series: " + path);
  out << "# sample_rate: " << io::format_double(ts.sample_rate) << "\n";
  out << "displacement\n";
  for (double v : ts.samples) out << io::format_double(v) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline TimeSeries read_timeseries_csv(const std::string& path) {
  const auto table = io::read_csv(path);
  const auto it = table.metadata.find("sample_rate");
  if (it == table.metadata.end())
    throw std::runtime_error("time-series CSV missing '# sample_rate:' header: " + path);
  TimeSeries ts;
  ts.sample_rate = io::parse_double(it->second, path);
  const int col = table.column_index("displacement");
  if (col < 0) throw std::runtime_error("time-series CSV missing 'displacement' column: " + path);
  ts.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) ts.samples.push_back(io::parse_double(row[col], path));
  ts.validate();
  return ts;
}

namespace detail {
constexpr std::uint32_t timeseries_magic = 0x4d485350;  // "PSHM"
}

inline void write_timeseries_binary(const std::string& path, const TimeSeries& ts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write time series: " + path);
  const std::uint32_t magic = detail::timeseries_magic;
  const std::uint64_t count = ts.samples.size();
  out.write(reinterpret_cast<const char*>(&magic), sizeof(magic));
  out.write(reinterpret_cast<const char*>(&ts.sample_rate), sizeof(double));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(ts.samples.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline TimeSeries read_timeseries_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open time series: " + path);
  std::uint32_t magic = 0;
  std::uint64_t count = 0;
  TimeSeries ts;
  in.read(reinterpret_cast<char*>(&magic), sizeof(magic));
  if (!in || magic != detail::timeseries_magic)
    throw std::runtime_error("not a time-series binary file: " + path);
  in.read(reinterpret_cast<char*>(&ts.sample_rate), sizeof(double));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw std::runtime_error("truncated time-series file: " + path);
  ts.samples.resize(count);
  in.read(reinterpret_cast<char*>(ts.samples.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("truncated time-series file: " + path);
  ts.validate();
  return ts;
}

}  // namespace pileshm
