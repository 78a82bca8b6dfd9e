#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isqw/numerics.hpp"
#include "isqw/specfun.hpp"
#include "isqw/states.hpp"

namespace isqw {

// GeCS -> GCS parameter map: n0 = z0 - 1, sigma0^2 = z0 / 2.
inline GCS map_parameters(double z0, double phi0) {
  if (!(z0 > 1.0)) throw std::domain_error("map_parameters: z0 <= 1 (n0 would be negative)");
  return GCS{z0 - 1.0, std::sqrt(0.5 * z0), phi0};
}

struct EquivalenceReport {
  double z0;
  double fidelity;       // |<Psi_Ge | Psi_G>|^2
  double coeff_L1;       // L1 distance between |C^Ge|^2 and the mapped prediction
  double max_ratio_dev;  // max over the central +-3 sigma0 window of ||C^Ge|^2/|C^G|^2 - 1|
};

// Compares the GeCS at z0 against the GCS under the parameter map. The L1
// diagnostic follows the identity
//   |C^Ge_n|^2 = pref * |C^G_n|^2 * (n+1)/(n+2),
//   pref = e^{2 z0} N_G / (2 pi z0 I_2(2 z0)),
// with e^{2 z0}/I_2(2 z0) evaluated through the scaled Bessel function.
inline EquivalenceReport equivalence_report(double z0, double phi0) {
  GCS mapped = map_parameters(z0, phi0);
  CoefficientVector ge = build_gecs(GeCS{z0, phi0});
  CoefficientVector gc = build_gcs(mapped);

  EquivalenceReport r{};
  r.z0 = z0;
  r.fidelity = std::norm(overlap(ge, gc));

  double ng = gaussian_lattice_sum(mapped.n0, mapped.sigma0);
  double pref = ng / (2.0 * std::numbers::pi * z0 * bessel_I2_scaled(2.0 * z0));

  KahanSum<double> l1;
  double max_dev = 0.0;
  for (long n = ge.n_min; n <= ge.n_max(); ++n) {
    double ge2 = std::norm(ge.amplitudes[n - ge.n_min]);
    double d = static_cast<double>(n) - mapped.n0;
    double g2 = std::exp(-d * d / (2.0 * mapped.sigma0 * mapped.sigma0)) / ng;
    double predicted = pref * g2 * (n + 1.0) / (n + 2.0);
    l1.add(std::abs(ge2 - predicted));
    if (std::abs(d) <= 3.0 * mapped.sigma0 && g2 > 0.0)
      max_dev = std::max(max_dev, std::abs(ge2 / g2 - 1.0));
  }
  r.coeff_L1 = l1.value();
  r.max_ratio_dev = max_dev;
  return r;
}

// Total-variation distance between the Poisson(z0) law in (n+1) and the
// Gaussian of mean z0, std sqrt(z0), both restricted to n >= 0 and
// renormalized.
inline double poisson_gaussian_gap(double z0) {
  if (!(z0 > 1.0)) throw std::domain_error("poisson_gaussian_gap: z0 <= 1");
  double width = 20.0 * std::sqrt(z0) + 50.0;
  long n_hi = static_cast<long>(z0 + width);

  std::vector<double> pois(n_hi + 1), gauss(n_hi + 1);
  KahanSum<double> sp, sg;
  for (long n = 0; n <= n_hi; ++n) {
    double k = static_cast<double>(n + 1);
    double lp = k * std::log(z0) - z0 - std::lgamma(k + 1.0);
    pois[n] = std::exp(lp);
    double d = k - z0;
    gauss[n] = std::exp(-d * d / (2.0 * z0));
    sp.add(pois[n]);
    sg.add(gauss[n]);
  }
  KahanSum<double> tv;
  for (long n = 0; n <= n_hi; ++n) tv.add(std::abs(pois[n] / sp.value() - gauss[n] / sg.value()));
  return 0.5 * tv.value();
}

}  // namespace isqw
