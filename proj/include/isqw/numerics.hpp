#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace isqw {

// Kahan compensated accumulator. Sums with thousands of terms at mixed
// magnitudes appear all over this library; plain accumulation loses digits.
template <typename T>
class KahanSum {
 public:
  void add(T term) {
    T y = term - comp_;
    T t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T comp_{};
};

// Composite Simpson quadrature of f on [a, b] with `panels` panels
// (panels rounded up to even).
template <typename F>
auto simpson(F&& f, double a, double b, int panels)
    -> decltype(f(a)) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  double h = (b - a) / panels;
  using R = decltype(f(a));
  KahanSum<R> acc;
  acc.add(f(a));
  acc.add(f(b));
  for (int i = 1; i < panels; ++i) {
    double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc.add(w * f(a + i * h));
  }
  return acc.value() * (h / 3.0);
}

// Static-partition parallel loop over [0, n). Every index writes its own
// output slot with a fixed serial reduction order inside, so results are
// bitwise identical for any thread count.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& body) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  if (threads > n) threads = n;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace isqw
