// Test-only oracles, independent of the production evaluation paths.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "isqw/numerics.hpp"

namespace oracle {

// Frozen 50-digit reference values (rounded to double).
inline constexpr double kSqrt2OverPiSin12 = 0.74365959675806446;  // sqrt(2/pi) sin(1.2)
inline constexpr double kI2of2 = 0.68894844769873820;             // I_2(2)
inline constexpr double kI2of2Scaled = 0.093239033304733380;      // e^-2 I_2(2)
inline constexpr double kErf1 = 0.84270079294971487;              // erf(1)
inline constexpr double kI2Scaled30 = 0.068351524442327457;       // e^-30 I_2(30)
inline constexpr double kI2Scaled60 = 0.049905561500642217;       // e^-60 I_2(60)
inline constexpr double kI2Scaled200 = 0.027945594915163586;      // e^-200 I_2(200)

// I_2 by a long-double power series, independent of the production
// branch/crossover logic. Usable up to x ~ 300 (scaled output).
inline double i2_scaled_series(double x) {
  long double q = 0.25L * static_cast<long double>(x) * x;
  long double term = 0.5L * q;
  long double sum = term;
  for (int k = 0; k < 2000; ++k) {
    term *= q / ((k + 1.0L) * (k + 3.0L));
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return static_cast<double>(sum * std::exp(-static_cast<long double>(x)));
}

// Richardson-checked composite Simpson: evaluates at n and 2n panels and
// returns the finer result; *err_estimate reports the difference.
template <typename F>
auto simpson_refined(F&& f, double a, double b, int panels, double* err_estimate = nullptr)
    -> decltype(f(a)) {
  auto coarse = isqw::simpson(f, a, b, panels);
  auto fine = isqw::simpson(f, a, b, 2 * panels);
  if (err_estimate) *err_estimate = std::abs(fine - coarse);
  return fine;
}

}  // namespace oracle
