#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pileshm {

inline constexpr const char* version = "0.1.0";

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// FNV-1a, used for config hashes in output metadata (std::hash is not stable).
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Standard normal pdf/cdf and log-cdf helpers shared by the hierarchical
// model (truncation constants) and the rank-normalization diagnostics.
inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(two_pi); }

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Mills-ratio series shared by log_norm_cdf and the hazard so the two stay
// exact derivatives of each other:
// Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8), z << 0.
inline double detail_mills_series(double z2) {
  const double inv = 1.0 / z2;
  return inv * (-1.0 + inv * (3.0 + inv * (-15.0 + inv * 105.0)));
}

// log Phi(z) without underflow in the far left tail (asymptotic expansion).
inline double log_norm_cdf(double z) {
  if (z > -10.0) return std::log(norm_cdf(z));
  double z2 = z * z;
  return -0.5 * z2 - 0.5 * std::log(two_pi) - std::log(-z) +
         std::log1p(detail_mills_series(z2));
}

// Hazard phi(z)/Phi(z), stable for z << 0.
inline double norm_pdf_over_cdf(double z) {
  if (z > -10.0) return norm_pdf(z) / norm_cdf(z);
  double z2 = z * z;
  return -z / (1.0 + detail_mills_series(z2));
}

// Inverse standard normal CDF: Acklam's rational approximation refined by one
// Halley step, accurate to near machine precision over (0, 1).
inline double norm_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("norm_inv_cdf: p must be in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement
  double e = norm_cdf(x) - p;
  double u = e * std::sqrt(two_pi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

inline bool approx_equal(double a, double b, double rel, double abs_tol = 0.0) {
  double diff = std::abs(a - b);
  return diff <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace pileshm
