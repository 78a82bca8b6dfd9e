#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

#include "isqw/numerics.hpp"
#include "isqw/specfun.hpp"
#include "isqw/well.hpp"

namespace isqw {

// Eigenstate of the annihilation operator, z = z0 sqrt(hbar omega) e^{-i phi0}.
struct GeCS {
  double z0;
  double phi0;
};

// Gaussian superposition centered at quantum number n0 with width sigma0.
struct GCS {
  double n0;
  double sigma0;
  double phi0;
};

using StateSpec = std::variant<GeCS, GCS>;

inline constexpr double kDefaultTailTol = 1e-12;

// Truncated complex amplitudes over quantum numbers [n_min, n_max],
// renormalized so that sum |c_n|^2 = 1 holds exactly as a contract.
struct CoefficientVector {
  long n_min = 0;
  std::vector<complex> amplitudes;
  StateSpec spec;

  long n_max() const { return n_min + static_cast<long>(amplitudes.size()) - 1; }
  int size() const { return static_cast<int>(amplitudes.size()); }

  double norm_sq() const {
    KahanSum<double> s;
    for (const auto& c : amplitudes) s.add(std::norm(c));
    return s.value();
  }

  void renormalize() {
    double inv = 1.0 / std::sqrt(norm_sq());
    for (auto& c : amplitudes) c *= inv;
  }
};

// GeCS amplitudes: |c_n| proportional to z0^{n+1} / sqrt(n! (n+2)!),
// phase e^{-i n phi0}. Built in the log domain with max-subtraction:
// n!(n+2)! overflows doubles near n = 85 while the physics needs n up to
// thousands. The window keeps every n whose weight is within the tail
// tolerance of the peak; the vector is renormalized after truncation.
inline CoefficientVector build_gecs(const GeCS& spec, double rel_tail_tol = kDefaultTailTol) {
  if (!(spec.z0 > 0.0)) throw std::domain_error("build_gecs: z0 <= 0");
  if (!(rel_tail_tol > 0.0) || rel_tail_tol > 1e-6)
    throw std::domain_error("build_gecs: rel_tail_tol outside (0, 1e-6]");

  double lz = std::log(spec.z0);
  if (!std::isfinite(lz * spec.z0))
    throw std::overflow_error("build_gecs: z0 too large for log-domain construction");

  // log|c_n| up to a constant; the normalization is restored numerically.
  auto logw = [&](long n) {
    return (static_cast<double>(n) + 1.0) * lz -
           0.5 * (std::lgamma(static_cast<double>(n) + 1.0) +
                  std::lgamma(static_cast<double>(n) + 3.0));
  };

  // |c_n|^2 / max must drop below rel_tail_tol well before the cut; keep a
  // margin so the discarded probability (not just the edge term) is small.
  double cut = 0.5 * (-std::log(rel_tail_tol)) + 8.0;

  long peak = std::max<long>(0, std::lround(spec.z0) - 1);
  double max_lw = logw(peak);
  long lo = peak;
  while (lo > 0 && logw(lo - 1) > max_lw - cut) --lo;
  long hi = peak;
  while (logw(hi + 1) > max_lw - cut) ++hi;

  CoefficientVector v;
  v.n_min = lo;
  v.spec = spec;
  v.amplitudes.resize(hi - lo + 1);
  for (long n = lo; n <= hi; ++n) {
    double mag = std::exp(logw(n) - max_lw);
    double ph = -static_cast<double>(n) * spec.phi0;
    v.amplitudes[n - lo] = std::polar(mag, ph);
  }
  v.renormalize();
  return v;
}

// GCS amplitudes c_n = e^{-(n-n0)^2/(4 sigma0^2) - i n phi0} / sqrt(N_G),
// windowed at k sigma0 around n0 with k derived from the tail tolerance
// (k = 10 for 1e-12-class tails) and renormalized after truncation.
inline CoefficientVector build_gcs(const GCS& spec, double rel_tail_tol = kDefaultTailTol) {
  if (!(spec.sigma0 > 0.0)) throw std::domain_error("build_gcs: sigma0 <= 0");
  if (!(spec.n0 >= 0.0)) throw std::domain_error("build_gcs: n0 < 0");
  if (!(rel_tail_tol > 0.0)) throw std::domain_error("build_gcs: rel_tail_tol <= 0");

  double k = std::ceil(std::sqrt(2.0 * std::log(1.0 / rel_tail_tol))) + 2.0;
  long lo = std::max<long>(0, static_cast<long>(std::ceil(spec.n0 - k * spec.sigma0)));
  long hi = static_cast<long>(std::floor(spec.n0 + k * spec.sigma0));
  if (hi < lo) hi = lo;

  CoefficientVector v;
  v.n_min = lo;
  v.spec = spec;
  v.amplitudes.resize(hi - lo + 1);
  for (long n = lo; n <= hi; ++n) {
    double d = static_cast<double>(n) - spec.n0;
    double mag = std::exp(-d * d / (4.0 * spec.sigma0 * spec.sigma0));
    v.amplitudes[n - lo] = std::polar(mag, -static_cast<double>(n) * spec.phi0);
  }
  v.renormalize();
  return v;
}

inline CoefficientVector build_state(const StateSpec& spec, double rel_tail_tol = kDefaultTailTol) {
  if (const auto* ge = std::get_if<GeCS>(&spec)) return build_gecs(*ge, rel_tail_tol);
  return build_gcs(std::get<GCS>(spec), rel_tail_tol);
}

// <a|b> over the union window; indices present in only one vector
// contribute zero.
inline complex overlap(const CoefficientVector& a, const CoefficientVector& b) {
  long lo = std::max(a.n_min, b.n_min);
  long hi = std::min(a.n_max(), b.n_max());
  KahanSum<double> re, im;
  for (long n = lo; n <= hi; ++n) {
    complex t = std::conj(a.amplitudes[n - a.n_min]) * b.amplitudes[n - b.n_min];
    re.add(t.real());
    im.add(t.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace isqw
