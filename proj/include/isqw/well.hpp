#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "isqw/numerics.hpp"

namespace isqw {

using complex = std::complex<double>;

// Physical configuration of the 1D infinite square well.
struct WellParams {
  double mass;
  double length;
  double hbar;
  double omega;  // pi^2 hbar / (2 M L^2)

  WellParams(double M, double L, double hb) : mass(M), length(L), hbar(hb) {
    if (!(M > 0.0) || !(L > 0.0) || !(hb > 0.0))
      throw std::domain_error("WellParams: M, L, hbar must be positive");
    omega = std::numbers::pi * std::numbers::pi * hb / (2.0 * M * L * L);
  }

  double alpha() const { return std::numbers::pi / length; }

  // Natural units of the reference figures.
  static WellParams natural() { return WellParams(1.0, std::numbers::pi, 1.0); }
};

// Energy spectrum. shifted(n) = n(n+2) is the dimensionless spectrum of the
// Hamiltonian with the ground energy subtracted.
struct Spectrum {
  WellParams well;

  double energy(long n) const {
    double np = static_cast<double>(n + 1);
    return well.hbar * well.omega * np * np;
  }
  static double shifted(long n) { return static_cast<double>(n) * static_cast<double>(n + 2); }
};

// psi_n(x) = sqrt(2/L) sin((n+1) pi x / L), exactly zero at the walls.
inline double eigenfunction(const WellParams& w, long n, double x) {
  if (n < 0) throw std::domain_error("eigenfunction: n < 0");
  if (x < 0.0 || x > w.length)
    throw std::domain_error("eigenfunction: x outside [0, L]");
  if (x == 0.0 || x == w.length) return 0.0;
  return std::sqrt(2.0 / w.length) *
         std::sin((static_cast<double>(n) + 1.0) * std::numbers::pi * x / w.length);
}

// Minimal dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const complex& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  CMatrix adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("CMatrix: shape mismatch");
    CMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        complex aik = a(i, k);
        if (aik == complex{}) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
    CMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
    CMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
  }
  friend CMatrix operator*(complex s, const CMatrix& a) {
    CMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = s * a.data_[i];
    return r;
  }

  // Max |entry| over the top-left (rows-1)x(cols-1) block, i.e. excluding
  // the truncation edge row and column.
  double max_abs_interior() const {
    double m = 0.0;
    for (int i = 0; i + 1 < rows_; ++i)
      for (int j = 0; j + 1 < cols_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<complex> data_;
};

// Truncated a, a^dagger and number operator in the energy basis.
// a psi_n = sqrt(n(n+2)) psi_{n-1}.
struct LadderMatrices {
  int dim;
  CMatrix a;
  CMatrix a_dagger;
  CMatrix number;
};

inline LadderMatrices ladder_matrices(int dim) {
  if (dim < 2) throw std::domain_error("ladder_matrices: dim < 2");
  LadderMatrices m{dim, CMatrix(dim, dim), CMatrix(dim, dim), CMatrix(dim, dim)};
  for (int n = 1; n < dim; ++n) m.a(n - 1, n) = std::sqrt(Spectrum::shifted(n));
  m.a_dagger = m.a.adjoint();
  for (int n = 0; n < dim; ++n) m.number(n, n) = static_cast<double>(n);
  return m;
}

// Residuals of the su(1,1) relations [a,N]=a, [a^dagger,N]=-a^dagger,
// [a,a^dagger]=2(N+3/2), measured on the interior block only: the hard
// truncation breaks [a,a^dagger] on the last row, which is an artifact of
// the finite basis rather than of the algebra.
struct Su11Report {
  double dev_a_number;
  double dev_adag_number;
  double dev_a_adag;
  bool within(double tol) const {
    return dev_a_number <= tol && dev_adag_number <= tol && dev_a_adag <= tol;
  }
};

inline Su11Report check_su11(int dim) {
  if (dim < 4) throw std::domain_error("check_su11: dim < 4");
  auto m = ladder_matrices(dim);
  CMatrix c1 = m.a * m.number - m.number * m.a - m.a;
  CMatrix c2 = m.a_dagger * m.number - m.number * m.a_dagger + m.a_dagger;
  CMatrix rhs(dim, dim);
  for (int n = 0; n < dim; ++n) rhs(n, n) = 2.0 * (static_cast<double>(n) + 1.5);
  CMatrix c3 = m.a * m.a_dagger - m.a_dagger * m.a - rhs;
  return {c1.max_abs_interior(), c2.max_abs_interior(), c3.max_abs_interior()};
}

// Applies the differential realization
//   a = [cos(ax) - i sin(ax)/(hbar a) p (N+1)^{-1}] sqrt(shifted(N))
// to psi_n sampled on a uniform grid and returns the max L2 residual
// against sqrt(shifted(n)) psi_{n-1} over 1 <= n <= dim-1. The derivative
// uses central finite differences (order 2 or 4); boundary points are
// skipped. Operator ordering follows the printed formula: (N+1)^{-1} acts
// after sqrt(shifted(N)), both diagonal on psi_n.
inline double position_realization_check(const WellParams& w, int dim, int grid_points,
                                         int fd_order = 4) {
  if (dim < 3) throw std::domain_error("position_realization_check: dim < 3");
  if (fd_order != 2 && fd_order != 4)
    throw std::invalid_argument("position_realization_check: fd_order must be 2 or 4");
  if ((grid_points - 1) < 20 * dim)
    throw std::domain_error("position_realization_check: grid too coarse (< 20 pts per half-wavelength)");

  double h = w.length / (grid_points - 1);
  double al = w.alpha();
  std::vector<double> x(grid_points), psi_n(grid_points), psi_prev(grid_points);
  for (int i = 0; i < grid_points; ++i) x[i] = (i == grid_points - 1) ? w.length : i * h;

  double worst = 0.0;
  int skip = fd_order / 2;
  for (int n = 1; n < dim; ++n) {
    for (int i = 0; i < grid_points; ++i) {
      psi_n[i] = eigenfunction(w, n, x[i]);
      psi_prev[i] = eigenfunction(w, n - 1, x[i]);
    }
    double root = std::sqrt(Spectrum::shifted(n));
    KahanSum<double> err2;
    for (int i = skip; i < grid_points - skip; ++i) {
      double d1;
      if (fd_order == 2) {
        d1 = (psi_n[i + 1] - psi_n[i - 1]) / (2.0 * h);
      } else {
        d1 = (-psi_n[i + 2] + 8.0 * psi_n[i + 1] - 8.0 * psi_n[i - 1] + psi_n[i - 2]) / (12.0 * h);
      }
      // p psi = -i hbar psi'; the two i factors combine to a real result.
      double applied = root * (std::cos(al * x[i]) * psi_n[i] -
                               std::sin(al * x[i]) * d1 / (al * (n + 1.0)));
      double r = applied - root * psi_prev[i];
      err2.add(r * r * h);
    }
    worst = std::max(worst, std::sqrt(err2.value()));
  }
  return worst;
}

}  // namespace isqw
