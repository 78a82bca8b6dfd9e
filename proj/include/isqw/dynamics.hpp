#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "isqw/grids.hpp"
#include "isqw/numerics.hpp"
#include "isqw/states.hpp"
#include "isqw/well.hpp"

namespace isqw {

// A numerical contract (hermiticity, uncertainty floor, ...) failed.
// The CLI maps this to its own exit code, distinct from config errors.
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// c_n(t) = c_n e^{-i omega n(n+2) t}. Pure phases, norm preserved.
inline CoefficientVector evolve(const CoefficientVector& v, const WellParams& w, double t) {
  if (!(t >= 0.0) && t != t) throw std::domain_error("evolve: t is NaN");
  CoefficientVector r = v;
  for (long n = v.n_min; n <= v.n_max(); ++n) {
    double phase = -w.omega * Spectrum::shifted(n) * t;
    r.amplitudes[n - v.n_min] *= std::polar(1.0, phase);
  }
  return r;
}

namespace detail {
inline void require_resolution(const CoefficientVector& v, const SpaceGrid& g, int pts_per_half = 8) {
  long n_max = v.n_max();
  if ((g.count - 1) < pts_per_half * (n_max + 1))
    throw std::domain_error("grid does not resolve n_max (need >= 8 points per half-wavelength)");
}
}  // namespace detail

// Psi(x, t) = sum_n c_n e^{-i omega n(n+2) t} psi_n(x) pointwise on the grid.
inline std::vector<complex> wavefunction(const CoefficientVector& v, const SpaceGrid& g,
                                         double t, int threads = 1) {
  detail::require_resolution(v, g);
  CoefficientVector vt = evolve(v, g.well, t);
  std::vector<complex> out(g.count);
  parallel_for(g.count, threads, [&](int i) {
    double x = g.x(i);
    KahanSum<double> re, im;
    for (long n = vt.n_min; n <= vt.n_max(); ++n) {
      complex term = vt.amplitudes[n - vt.n_min] * eigenfunction(g.well, n, x);
      re.add(term.real());
      im.add(term.imag());
    }
    out[i] = {re.value(), im.value()};
  });
  return out;
}

inline std::vector<double> density(const CoefficientVector& v, const SpaceGrid& g,
                                   double t, int threads = 1) {
  auto psi = wavefunction(v, g, t, threads);
  std::vector<double> out(g.count);
  for (int i = 0; i < g.count; ++i) out[i] = std::norm(psi[i]);
  return out;
}

// Alternative evaluation of the GCS density as the explicit double sum
//   (1/(N_G L)) sum_{n,n'} e^{-Phi(n,n')} [cos((n'-n)pi x/L) - cos((n'+n+2)pi x/L)]
// with Phi = ((n-n0)^2 + (n'-n0)^2)/(4 sigma0^2) + i phi0 (n-n') +
//            i omega t (n(n+2) - n'(n'+2)).
// Independent of the wavefunction path; used as a cross-check.
inline std::vector<double> density_phi_kernel(const GCS& spec, const SpaceGrid& g,
                                              double t, int threads = 1) {
  const WellParams& w = g.well;
  double s2 = spec.sigma0 * spec.sigma0;
  double norm = gaussian_lattice_sum(spec.n0, spec.sigma0);
  double k = 10.0;
  long lo = std::max<long>(0, static_cast<long>(std::ceil(spec.n0 - k * spec.sigma0)));
  long hi = static_cast<long>(std::floor(spec.n0 + k * spec.sigma0));

  std::vector<double> out(g.count);
  parallel_for(g.count, threads, [&](int i) {
    double x = g.x(i);
    KahanSum<double> acc;
    for (long np = lo; np <= hi; ++np) {
      for (long n = lo; n <= hi; ++n) {
        double dn = static_cast<double>(n) - spec.n0;
        double dnp = static_cast<double>(np) - spec.n0;
        double mag = std::exp(-(dn * dn + dnp * dnp) / (4.0 * s2));
        double arg = -spec.phi0 * static_cast<double>(n - np) -
                     w.omega * t * (Spectrum::shifted(n) - Spectrum::shifted(np));
        double pi_L = std::numbers::pi * x / w.length;
        double bracket = std::cos(static_cast<double>(np - n) * pi_L) -
                         std::cos(static_cast<double>(np + n + 2) * pi_L);
        acc.add(mag * std::cos(arg) * bracket);
      }
    }
    out[i] = acc.value() / (norm * w.length);
  });
  return out;
}

// Closed-form matrix elements in the energy basis, with n' = n+1, m' = m+1.
// These are implementer-derived; the test suite validates every one of them
// against a composite-quadrature oracle before they are trusted.

inline double x_matrix_element(const WellParams& w, long n, long m) {
  if (n < 0 || m < 0) throw std::domain_error("x_matrix_element: negative index");
  if (n == m) return 0.5 * w.length;
  if ((n + m) % 2 == 0) return 0.0;  // n'+m' even: parity selection rule
  double np = static_cast<double>(n + 1), mp = static_cast<double>(m + 1);
  double d2 = (np * np - mp * mp) * (np * np - mp * mp);
  return -8.0 * w.length * np * mp / (std::numbers::pi * std::numbers::pi * d2);
}

inline double x2_matrix_element(const WellParams& w, long n, long m) {
  if (n < 0 || m < 0) throw std::domain_error("x2_matrix_element: negative index");
  double np = static_cast<double>(n + 1), mp = static_cast<double>(m + 1);
  double pi2 = std::numbers::pi * std::numbers::pi;
  if (n == m)
    return w.length * w.length * (1.0 / 3.0 - 1.0 / (2.0 * pi2 * np * np));
  double d2 = (np * np - mp * mp) * (np * np - mp * mp);
  double sign = ((n + m) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{n'+m'}
  return sign * 8.0 * w.length * w.length * np * mp / (pi2 * d2);
}

inline complex p_matrix_element(const WellParams& w, long n, long m) {
  if (n < 0 || m < 0) throw std::domain_error("p_matrix_element: negative index");
  if (n == m) return {0.0, 0.0};
  long np = n + 1, mp = m + 1;
  if ((np + mp) % 2 == 0) return {0.0, 0.0};  // parity selection rule
  double a = static_cast<double>(np), b = static_cast<double>(mp);
  return complex{0.0, -4.0 * w.hbar * a * b / (w.length * (a * a - b * b))};
}

inline double p2_matrix_element(const WellParams& w, long n, long m) {
  if (n < 0 || m < 0) throw std::domain_error("p2_matrix_element: negative index");
  if (n != m) return 0.0;
  double k = static_cast<double>(n + 1) * std::numbers::pi * w.hbar / w.length;
  return k * k;
}

// Time-indexed expectation values and the uncertainty product (in units
// of hbar when hbar = 1; Delta = Delta_x * Delta_p generally).
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> mean_x;
  std::vector<double> mean_p;
  std::vector<double> delta_x;
  std::vector<double> delta_p;
  std::vector<double> heisenberg;
};

namespace detail {

// Dense matrix block for the vector's window.
inline CMatrix build_block(const WellParams& w, long lo, int dim,
                           complex (*elem)(const WellParams&, long, long)) {
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = elem(w, lo + i, lo + j);
  return m;
}

inline complex expectation(const std::vector<complex>& c, const CMatrix& A) {
  int d = static_cast<int>(c.size());
  KahanSum<double> re, im;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      complex t = std::conj(c[i]) * A(i, j) * c[j];
      re.add(t.real());
      im.add(t.imag());
    }
  return {re.value(), im.value()};
}

}  // namespace detail

inline ObservableSeries observables(const CoefficientVector& v, const WellParams& w,
                                    const TimeGrid& tg, int threads = 1) {
  long lo = v.n_min;
  int dim = v.size();

  auto wrap_x = +[](const WellParams& ww, long n, long m) { return complex{x_matrix_element(ww, n, m), 0.0}; };
  auto wrap_x2 = +[](const WellParams& ww, long n, long m) { return complex{x2_matrix_element(ww, n, m), 0.0}; };
  auto wrap_p = +[](const WellParams& ww, long n, long m) { return p_matrix_element(ww, n, m); };
  auto wrap_p2 = +[](const WellParams& ww, long n, long m) { return complex{p2_matrix_element(ww, n, m), 0.0}; };

  CMatrix X = detail::build_block(w, lo, dim, wrap_x);
  CMatrix X2 = detail::build_block(w, lo, dim, wrap_x2);
  CMatrix P = detail::build_block(w, lo, dim, wrap_p);
  CMatrix P2 = detail::build_block(w, lo, dim, wrap_p2);

  ObservableSeries s;
  s.times.resize(tg.count);
  s.mean_x.resize(tg.count);
  s.mean_p.resize(tg.count);
  s.delta_x.resize(tg.count);
  s.delta_p.resize(tg.count);
  s.heisenberg.resize(tg.count);

  std::vector<std::string> errors(tg.count);
  parallel_for(tg.count, threads, [&](int k) {
    double t = tg.time(k);
    CoefficientVector vt = evolve(v, w, t);
    complex ex = detail::expectation(vt.amplitudes, X);
    complex ex2 = detail::expectation(vt.amplitudes, X2);
    complex ep = detail::expectation(vt.amplitudes, P);
    complex ep2 = detail::expectation(vt.amplitudes, P2);
    for (complex e : {ex, ex2, ep, ep2}) {
      if (std::abs(e.imag()) > 1e-8) {
        errors[k] = "hermiticity violation: |Im<A>| > 1e-8";
        return;
      }
    }
    double vx = ex2.real() - ex.real() * ex.real();
    double vp = ep2.real() - ep.real() * ep.real();
    double dx = std::sqrt(std::max(0.0, vx));
    double dp = std::sqrt(std::max(0.0, vp));
    s.times[k] = t;
    s.mean_x[k] = ex.real();
    s.mean_p[k] = ep.real();
    s.delta_x[k] = dx;
    s.delta_p[k] = dp;
    s.heisenberg[k] = dx * dp;
    if (s.mean_x[k] < 0.0 || s.mean_x[k] > w.length)
      errors[k] = "mean_x escaped [0, L]";
    if (s.heisenberg[k] < 0.5 * w.hbar - 1e-9)
      errors[k] = "uncertainty product fell below hbar/2";
  });
  for (const auto& e : errors)
    if (!e.empty()) throw ContractViolation(e);
  return s;
}

}  // namespace isqw
