#pragma once

#include <stdexcept>
#include <vector>

#include "isqw/well.hpp"

namespace isqw {

// Uniform spatial grid on [0, L] with exact endpoints.
struct SpaceGrid {
  WellParams well;
  int count;

  SpaceGrid(const WellParams& w, int n) : well(w), count(n) {
    if (n < 2) throw std::domain_error("SpaceGrid: count < 2");
  }

  double spacing() const { return well.length / (count - 1); }
  double x(int i) const { return i == count - 1 ? well.length : i * spacing(); }

  std::vector<double> points() const {
    std::vector<double> p(count);
    for (int i = 0; i < count; ++i) p[i] = x(i);
    return p;
  }
};

// Uniform time grid t_i = t0 + i * dt.
struct TimeGrid {
  double t0;
  double dt;
  int count;

  TimeGrid(double start, double step, int n) : t0(start), dt(step), count(n) {
    if (!(start >= 0.0)) throw std::domain_error("TimeGrid: t0 < 0");
    if (!(step > 0.0)) throw std::domain_error("TimeGrid: dt <= 0");
    if (n < 1) throw std::domain_error("TimeGrid: count < 1");
  }

  double time(int i) const { return t0 + i * dt; }
};

}  // namespace isqw
