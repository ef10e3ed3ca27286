#pragma once

// Closed-form reference values used as test oracles.  Everything here is
// derived analytically and independent of the library implementation.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Dirichlet interval of length L: lambda_n = (n pi / L)^2, n >= 1.
inline std::vector<double> interval_dirichlet(double L, int count) {
  std::vector<double> out;
  for (int n = 1; n <= count; ++n) out.push_back(std::pow(n * kPi / L, 2));
  return out;
}

// Neumann interval: (n pi / L)^2, n >= 0.
inline std::vector<double> interval_neumann(double L, int count) {
  std::vector<double> out;
  for (int n = 0; n < count; ++n) out.push_back(std::pow(n * kPi / L, 2));
  return out;
}

// Loop of length L: 0, then (2 pi n / L)^2 with multiplicity 2.
inline std::vector<double> loop(double L, int count) {
  std::vector<double> out{0.0};
  for (int n = 1; static_cast<int>(out.size()) < count; ++n) {
    const double lam = std::pow(2 * kPi * n / L, 2);
    out.push_back(lam);
    out.push_back(lam);
  }
  out.resize(count);
  return out;
}

// Star with K unit-length arms, Dirichlet tips, Kirchhoff center.
// Secular equation: cos k = 0 (simple) or sin k = 0, k > 0 (mult K-1).
inline std::vector<double> star_unit(int K, int count) {
  std::vector<double> ks;
  for (int m = 0; static_cast<int>(ks.size()) < count + K; ++m) {
    ks.push_back(kPi / 2 + m * kPi);
    for (int j = 0; j < K - 1; ++j) ks.push_back((m + 1) * kPi);
  }
  std::sort(ks.begin(), ks.end());
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(ks[i] * ks[i]);
  return out;
}

// #{n >= 1 : (n pi / L)^2 <= lam} with a tie tolerance.
inline int interval_dirichlet_count(double L, double lam) {
  if (lam < 0) return 0;
  return static_cast<int>(std::floor(L * std::sqrt(lam) / kPi + 1e-9));
}

// moduli of continuity s(mu, eps) = sup_l mu([l-eps, l+eps])

inline double s_uniform(double q_minus, double q_plus, double eps) {
  return std::min(1.0, 2 * eps / (q_plus - q_minus));
}

inline double s_bernoulli(double p, double q_minus, double q_plus, double eps) {
  if (2 * eps >= q_plus - q_minus) return 1.0;
  return std::max(p, 1.0 - p);
}

inline double s_point_mass(double) { return 1.0; }

// F(x) = (x/x0)^tau: density monotone, so the sup sits at a support end.
inline double s_power(double tau, double x0, double eps) {
  if (eps <= 0) return 0.0;
  if (2 * eps >= x0) return 1.0;
  if (tau >= 1.0) return 1.0 - std::pow(1.0 - 2 * eps / x0, tau);
  return std::pow(2 * eps / x0, tau);
}

inline double log_hoelder_cdf(double alpha, double x0, double x) {
  if (x <= 0) return 0.0;
  if (x >= x0) return 1.0;
  return std::pow(1.0 + std::log(x0 / x), -alpha);
}

// Density is U-shaped (decreasing below x0 e^-alpha, increasing above), so
// the sup is attained by a window flush against a support end.
inline double s_log_hoelder(double alpha, double x0, double eps) {
  if (eps <= 0) return 0.0;
  if (2 * eps >= x0) return 1.0;
  return std::max(log_hoelder_cdf(alpha, x0, 2 * eps),
                  1.0 - log_hoelder_cdf(alpha, x0, x0 - 2 * eps));
}

inline double covering(double l_e, double s_e, double inside) {
  return (l_e / s_e) * std::exp(8.0 * l_e * std::sqrt(inside));
}

inline std::string fibonacci_word(int generations) {
  std::string w = "a";
  for (int g = 1; g < generations; ++g) {
    std::string next;
    for (char c : w) next += (c == 'a') ? "ab" : "a";
    w = next;
  }
  return w;
}

// Two-sided Kolmogorov-Smirnov critical value at the 1% level.
inline double ks_critical_1pct(int n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
