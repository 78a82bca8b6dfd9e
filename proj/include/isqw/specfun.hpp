#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isqw/numerics.hpp"

namespace isqw {

// Bookkeeping for an exact-vs-asymptotic comparison.
struct AsymptoticReport {
  double argument;
  double exact;
  double asymptotic;
  double relative_error;
};

namespace detail {
// Crossover between the power series and the large-argument expansion of
// I2. The two branches agree to better than 1e-10 relative in a window
// around this point (tested), while the series stays cancellation-free
// (all terms positive) below it.
inline constexpr double kBesselCrossover = 30.0;
}  // namespace detail

// e^{-x} I_2(x) for x >= 0. Series branch below the crossover, asymptotic
// expansion above; finite for all representable x.
inline double bessel_I2_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_I2_scaled: x < 0");
  if (x == 0.0) return 0.0;
  if (x <= detail::kBesselCrossover) {
    // I_2(x) = sum_k (x/2)^{2k+2} / (k! (k+2)!)
    double q = 0.25 * x * x;
    double term = 0.5 * q;  // k = 0: (x/2)^2 / 2
    KahanSum<double> acc;
    acc.add(term);
    for (int k = 0; k < 500; ++k) {
      term *= q / ((k + 1.0) * (k + 3.0));
      acc.add(term);
      if (term < 1e-18 * acc.value()) break;
    }
    return acc.value() * std::exp(-x);
  }
  // I_2(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k / x^k,
  // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! 8^k), mu = 4 nu^2 = 16.
  const double mu = 16.0;
  double term = 1.0;
  KahanSum<double> acc;
  acc.add(term);
  double prev = std::abs(term);
  for (int k = 1; k <= 30; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    if (std::abs(term) >= prev) break;  // divergent tail of the asymptotic series
    prev = std::abs(term);
    acc.add(term);
    if (std::abs(term) < 1e-18 * std::abs(acc.value())) break;
  }
  return acc.value() / std::sqrt(2.0 * std::numbers::pi * x);
}

inline double erf(double x) { return std::erf(x); }

// One-term asymptotic form erf(x) ~ 1 + e^{-x^2} [-1/(sqrt(pi) x)].
inline double erf_asymptotic(double x) {
  if (!(x > 0.0)) throw std::domain_error("erf_asymptotic: x <= 0");
  return 1.0 - std::exp(-x * x) / (std::sqrt(std::numbers::pi) * x);
}

// Bernoulli numbers B_0..B_80 by the standard recurrence
// B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j, cached on first use.
inline const std::vector<double>& bernoulli_numbers() {
  static const std::vector<double> cache = [] {
    constexpr int kMax = 80;
    std::vector<double> b(kMax + 1, 0.0);
    b[0] = 1.0;
    for (int m = 1; m <= kMax; ++m) {
      KahanSum<double> s;
      double binom = 1.0;  // C(m+1, 0)
      for (int j = 0; j < m; ++j) {
        s.add(binom * b[j]);
        binom *= static_cast<double>(m + 1 - j) / (j + 1.0);
      }
      b[m] = -s.value() / (m + 1.0);
    }
    return b;
  }();
  return cache;
}

// |(1/2) coth(x/2) - 1/x - sum_{k=1}^{k_max} B_{2k}/(2k)! x^{2k-1}|.
// The identity holds for 0 < |x| < 2 pi.
inline double bernoulli_coth_check(double x, int k_max) {
  if (!(std::abs(x) > 0.0) || std::abs(x) >= 2.0 * std::numbers::pi)
    throw std::domain_error("bernoulli_coth_check: need 0 < |x| < 2 pi");
  if (k_max < 1 || 2 * k_max > 80)
    throw std::domain_error("bernoulli_coth_check: k_max out of cached range");
  const auto& B = bernoulli_numbers();
  KahanSum<double> s;
  double pow_x = x;          // x^{2k-1}
  double fact = 1.0;         // (2k)!
  for (int k = 1; k <= k_max; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    s.add(B[2 * k] / fact * pow_x);
    pow_x *= x * x;
  }
  double target = 0.5 / std::tanh(0.5 * x) - 1.0 / x;
  return std::abs(target - s.value());
}

// sum_{n>=0} exp(-(n + shift - mean)^2 / (2 sigma^2)), summed outward from
// the peak until terms fall below 1e-18 of the running total. The lower
// summation limit is clamped at n = 0.
inline double gaussian_lattice_sum(double mean, double sigma, long shift = 0) {
  if (!(sigma > 0.0)) throw std::domain_error("gaussian_lattice_sum: sigma <= 0");
  auto term = [&](long n) {
    double d = (static_cast<double>(n) + static_cast<double>(shift) - mean) / sigma;
    return std::exp(-0.5 * d * d);
  };
  long center = std::max<long>(0, std::lround(mean - static_cast<double>(shift)));
  KahanSum<double> acc;
  acc.add(term(center));
  for (long n = center + 1;; ++n) {
    double t = term(n);
    acc.add(t);
    if (t < 1e-18 * acc.value()) break;
  }
  for (long n = center - 1; n >= 0; --n) {
    double t = term(n);
    acc.add(t);
    if (t < 1e-18 * acc.value()) break;
  }
  return acc.value();
}

// Compares the exact normalization N_G(z0-1, sqrt(z0/2)) against its
// Euler-Maclaurin asymptotic sqrt(pi z0) + e^{-(1-z0)^2/z0} / (1 - e^2).
inline AsymptoticReport euler_maclaurin_N(double z0) {
  if (!(z0 > 1.0)) throw std::domain_error("euler_maclaurin_N: z0 <= 1");
  double exact = gaussian_lattice_sum(z0, std::sqrt(0.5 * z0), 1);
  double e = std::numbers::e;
  double asym = std::sqrt(std::numbers::pi * z0) +
                std::exp(-(1.0 - z0) * (1.0 - z0) / z0) / (1.0 - e * e);
  double rel = exact != 0.0 ? std::abs(exact - asym) / std::abs(exact) : 0.0;
  return {z0, exact, asym, rel};
}

}  // namespace isqw
