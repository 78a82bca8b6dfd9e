#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isqw/grids.hpp"
#include "isqw/numerics.hpp"
#include "isqw/specfun.hpp"
#include "isqw/states.hpp"
#include "isqw/well.hpp"

namespace isqw {

// Closed-form Gaussian packet parameters:
//   X = phi0 L / pi + P t / M,  P = (n0+1) pi hbar / L,
//   tau = (4 omega sigma0^2)^{-1},  sigma = sqrt(tau / (4 omega (tau^2 + t^2))),
//   s = L / (2 pi sigma).
struct GaussianPacket {
  double X;
  double P;
  double s;
  double sigma;
  double tau;
  double t;
};

inline GaussianPacket packet(const WellParams& w, const GCS& spec, double t) {
  if (!(spec.sigma0 > 0.0)) throw std::domain_error("packet: sigma0 <= 0");
  GaussianPacket p{};
  p.t = t;
  p.P = (spec.n0 + 1.0) * std::numbers::pi * w.hbar / w.length;
  p.X = spec.phi0 * w.length / std::numbers::pi + p.P * t / w.mass;
  p.tau = 1.0 / (4.0 * w.omega * spec.sigma0 * spec.sigma0);
  p.sigma = std::sqrt(p.tau / (4.0 * w.omega * (p.tau * p.tau + t * t)));
  p.s = w.length / (2.0 * std::numbers::pi * p.sigma);
  return p;
}

// Leading-order packet density: a normalized Gaussian of width s centered at X.
inline std::vector<double> approx_density(const GaussianPacket& p, const SpaceGrid& g) {
  std::vector<double> out(g.count);
  double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * p.s);
  for (int i = 0; i < g.count; ++i) {
    double d = g.x(i) - p.X;
    out[i] = norm * std::exp(-d * d / (2.0 * p.s * p.s));
  }
  return out;
}

// Packet wavefunction: (sqrt(2 pi) s)^{-1/2} e^{-(x-X)^2/(4 s^2) + i P x / hbar},
// valid up to an x-independent global phase.
inline std::vector<complex> approx_wavefunction(const GaussianPacket& p, const SpaceGrid& g) {
  std::vector<complex> out(g.count);
  double norm = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * p.s);
  for (int i = 0; i < g.count; ++i) {
    double x = g.x(i);
    double d = x - p.X;
    double mag = norm * std::exp(-d * d / (4.0 * p.s * p.s));
    out[i] = std::polar(mag, p.P * x / g.well.hbar);
  }
  return out;
}

struct FourierSeries {
  std::vector<double> values;
  bool tail_ok;  // false when e^{-j_max^2/(8 sigma^2)} >= 1e-14
};

// Mid-well Fourier form of the density,
//   P0 = 1/L + (2/L) sum_{j>=1} e^{-j^2/(8 sigma^2)} cos(j pi x/L)
//                                cos(j (phi0 + 2 omega t (n0+1))).
inline FourierSeries fourier_P0(const GCS& spec, const SpaceGrid& g, double t, int j_max) {
  const WellParams& w = g.well;
  GaussianPacket p = packet(w, spec, t);
  double sig2 = p.sigma * p.sigma;
  double theta = spec.phi0 + 2.0 * w.omega * t * (spec.n0 + 1.0);

  FourierSeries r;
  r.tail_ok = std::exp(-static_cast<double>(j_max) * j_max / (8.0 * sig2)) < 1e-14;
  r.values.assign(g.count, 0.0);
  for (int i = 0; i < g.count; ++i) {
    double x = g.x(i);
    KahanSum<double> acc;
    acc.add(1.0 / w.length);
    for (int j = 1; j <= j_max; ++j) {
      double damp = std::exp(-static_cast<double>(j) * j / (8.0 * sig2));
      acc.add(2.0 / w.length * damp * std::cos(j * std::numbers::pi * x / w.length) *
              std::cos(j * theta));
    }
    r.values[i] = acc.value();
  }
  return r;
}

// Border-correction series centered at j = 2 n0,
//   Pl = -(e^{-2 sigma^2 theta^2}/L) sum_{j>=0} e^{-(j-2n0)^2/(8 sigma^2)} cos(j pi x/L),
// truncated by the same Gaussian tail rule.
inline FourierSeries fourier_Pl(const GCS& spec, const SpaceGrid& g, double t) {
  const WellParams& w = g.well;
  GaussianPacket p = packet(w, spec, t);
  double sig2 = p.sigma * p.sigma;
  double theta = spec.phi0 + 2.0 * w.omega * t * (spec.n0 + 1.0);
  double pref = -std::exp(-2.0 * sig2 * theta * theta) / w.length;

  double width = std::sqrt(8.0 * sig2 * std::log(1e14));
  long jc = std::lround(2.0 * spec.n0);
  long j_lo = std::max<long>(0, jc - static_cast<long>(std::ceil(width)));
  long j_hi = jc + static_cast<long>(std::ceil(width));

  FourierSeries r;
  r.tail_ok = true;
  r.values.assign(g.count, 0.0);
  for (int i = 0; i < g.count; ++i) {
    double x = g.x(i);
    KahanSum<double> acc;
    for (long j = j_lo; j <= j_hi; ++j) {
      double d = static_cast<double>(j) - 2.0 * spec.n0;
      acc.add(std::exp(-d * d / (8.0 * sig2)) *
              std::cos(static_cast<double>(j) * std::numbers::pi * x / w.length));
    }
    r.values[i] = pref * acc.value();
  }
  return r;
}

// Even 2L-periodic Gaussian extension Pi(X, s, gamma; x).
inline double pi_gaussian(double X, double s, double gamma, double x) {
  double d = x - X;
  return std::exp(-d * d / (2.0 * s * s)) / (std::sqrt(2.0 * std::numbers::pi) * s) *
         std::cos(gamma * x);
}

// Symmetric border correction, as expected on symmetry grounds:
//   Pr = -e^{-(L-X)^2/(2 s^2)} Pi(X, s, 2 pi n0 / L; x).
inline std::vector<double> fourier_Pr(const GCS& spec, const SpaceGrid& g, double t) {
  const WellParams& w = g.well;
  GaussianPacket p = packet(w, spec, t);
  double gamma = 2.0 * std::numbers::pi * spec.n0 / w.length;
  double dl = w.length - p.X;
  double pref = -std::exp(-dl * dl / (2.0 * p.s * p.s));
  std::vector<double> out(g.count);
  for (int i = 0; i < g.count; ++i) out[i] = pref * pi_gaussian(p.X, p.s, gamma, g.x(i));
  return out;
}

// Left border correction in its closed form, -e^{-X^2/(2 s^2)} Pi(X, s, 2 pi n0/L; x).
inline std::vector<double> fourier_Pl_closed(const GCS& spec, const SpaceGrid& g, double t) {
  const WellParams& w = g.well;
  GaussianPacket p = packet(w, spec, t);
  double gamma = 2.0 * std::numbers::pi * spec.n0 / w.length;
  double pref = -std::exp(-p.X * p.X / (2.0 * p.s * p.s));
  std::vector<double> out(g.count);
  for (int i = 0; i < g.count; ++i) out[i] = pref * pi_gaussian(p.X, p.s, gamma, g.x(i));
  return out;
}

struct PiCoefficients {
  std::vector<double> closed;
  std::vector<double> quadrature;
  double max_discrepancy;
};

// Fourier cosine coefficients a_j of the even 2L-periodic extension of
// Pi(X, s, gamma; x), computed two ways: the full-line closed form
//   a_j ~ (1/L)[e^{-(b-gamma)^2 s^2/2} cos((b-gamma) X)
//             + e^{-(b+gamma)^2 s^2/2} cos((b+gamma) X)],  b = j pi / L
// (which reduces to (2/L) e^{-j^2/(8 sigma^2)} cos(j pi X/L) at gamma = 0),
// and direct quadrature of the defining integral over [0, L].
inline PiCoefficients pi_expansion_coeffs(double X, double s, double gamma, int j_max,
                                          const WellParams& w) {
  if (!(X > 0.0) || !(X < w.length))
    throw std::domain_error("pi_expansion_coeffs: X outside (0, L)");
  PiCoefficients r;
  r.closed.resize(j_max + 1);
  r.quadrature.resize(j_max + 1);
  r.max_discrepancy = 0.0;

  int panels = std::max(4000, 40 * j_max + static_cast<int>(gamma * w.length));
  for (int j = 0; j <= j_max; ++j) {
    double b = j * std::numbers::pi / w.length;
    double c1 = std::exp(-(b - gamma) * (b - gamma) * s * s / 2.0) * std::cos((b - gamma) * X);
    double c2 = std::exp(-(b + gamma) * (b + gamma) * s * s / 2.0) * std::cos((b + gamma) * X);
    r.closed[j] = (c1 + c2) / w.length;

    auto f = [&](double x) { return pi_gaussian(X, s, gamma, x) * std::cos(b * x); };
    r.quadrature[j] = 2.0 / w.length * simpson(f, 0.0, w.length, panels);
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.closed[j] - r.quadrature[j]));
  }
  return r;
}

// Closed form of int_0^L e^{-(x-X)^2/(alpha s^2) + i beta x} dx:
//   (sqrt(pi alpha) s / 2) e^{i beta X - alpha beta^2 s^2 / 4}
//     [erf((L-X)/(sqrt(alpha) s)) + erf(X/(sqrt(alpha) s))].
inline complex f_integral(const WellParams& w, double X, double s, double alpha, double beta) {
  if (!(s > 0.0)) throw std::domain_error("f_integral: s <= 0");
  if (!(alpha > 0.0)) throw std::domain_error("f_integral: alpha <= 0");
  double ra = std::sqrt(alpha);
  double pref = 0.5 * std::sqrt(std::numbers::pi * alpha) * s *
                std::exp(-alpha * beta * beta * s * s / 4.0);
  double erfs = erf((w.length - X) / (ra * s)) + erf(X / (ra * s));
  return pref * erfs * std::polar(1.0, beta * X);
}

// Quadrature companion for f_integral.
inline complex f_integral_quadrature(const WellParams& w, double X, double s, double alpha,
                                     double beta) {
  int panels = std::max(4000, static_cast<int>(8.0 * std::abs(beta) * w.length) + 4000);
  auto f = [&](double x) {
    double d = x - X;
    return std::polar(std::exp(-d * d / (alpha * s * s)), beta * x);
  };
  return simpson(f, 0.0, w.length, panels);
}

struct BnReport {
  complex closed;
  complex quadrature;
  double first_integral_mag;   // the term claimed negligible
  double second_integral_mag;  // the dominant term
};

// Fourier-sine coefficient of the odd 2L-periodic extension of the
// packet wavefunction, indexed by quantum number n with n' = n+1:
//   b_n ~ i (sqrt(8 pi) s)^{1/2} / L e^{i(P/hbar - n' pi/L) X - s^2 (P/hbar - n' pi/L)^2}.
// The quadrature path evaluates both f-integrals of the defining formula.
inline BnReport packet_bn(const GCS& spec, const WellParams& w, double t, long n) {
  if (n < 0) throw std::domain_error("packet_bn: n < 0");
  GaussianPacket p = packet(w, spec, t);
  double np = static_cast<double>(n + 1);
  double k_minus = p.P / w.hbar - np * std::numbers::pi / w.length;
  double k_plus = p.P / w.hbar + np * std::numbers::pi / w.length;

  BnReport r;
  double mag_exp = -p.s * p.s * k_minus * k_minus;
  double amp = std::sqrt(std::sqrt(8.0 * std::numbers::pi) * p.s) / w.length;
  r.closed = complex{0.0, 1.0} * amp * std::exp(mag_exp) * std::polar(1.0, k_minus * p.X);

  complex i_plus = f_integral_quadrature(w, p.X, p.s, 4.0, k_plus);
  complex i_minus = f_integral_quadrature(w, p.X, p.s, 4.0, k_minus);
  double norm = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * p.s);
  r.quadrature = norm / (complex{0.0, 1.0} * w.length) * (i_plus - i_minus);
  r.first_integral_mag = std::abs(i_plus);
  r.second_integral_mag = std::abs(i_minus);
  return r;
}

// Packet-approximation validity conditions, each as measured ratio vs threshold.
struct ValidityThresholds {
  double n0_over_sigma0 = 10.0;
  double sigma0 = 3.0;
  double x_over_s = 5.0;
  double lmx_over_s = 5.0;
  double tau_over_t = 5.0;
};

struct ValidityCheck {
  bool n0_much_greater_sigma0;
  bool sigma0_much_greater_one;
  bool x_much_greater_s;
  bool wall_much_greater_s;
  bool t_much_less_tau;
  double ratio_n0_sigma0;
  double ratio_sigma0;
  double ratio_x_s;
  double ratio_lmx_s;
  double ratio_tau_t;

  bool all() const {
    return n0_much_greater_sigma0 && sigma0_much_greater_one && x_much_greater_s &&
           wall_much_greater_s && t_much_less_tau;
  }
};

inline ValidityCheck check_validity(const GCS& spec, const WellParams& w, double t,
                                    const ValidityThresholds& thr = {}) {
  GaussianPacket p = packet(w, spec, t);
  ValidityCheck c{};
  c.ratio_n0_sigma0 = spec.n0 / spec.sigma0;
  c.ratio_sigma0 = spec.sigma0;
  c.ratio_x_s = p.X / p.s;
  c.ratio_lmx_s = (w.length - p.X) / p.s;
  c.ratio_tau_t = t > 0.0 ? p.tau / t : std::numeric_limits<double>::infinity();
  c.n0_much_greater_sigma0 = c.ratio_n0_sigma0 > thr.n0_over_sigma0;
  c.sigma0_much_greater_one = c.ratio_sigma0 > thr.sigma0;
  c.x_much_greater_s = c.ratio_x_s > thr.x_over_s;
  c.wall_much_greater_s = c.ratio_lmx_s > thr.lmx_over_s;
  c.t_much_less_tau = c.ratio_tau_t > thr.tau_over_t;
  return c;
}

}  // namespace isqw
