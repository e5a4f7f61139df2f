#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace kerr::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule; abscissae on [0, 1).
inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Estimate gk15(F&& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = kWk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 15};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) on a finite interval.  Bisects the
/// interval with the largest error estimate until the summed estimate meets
/// max(abs_tol, rel_tol |I|) or max_intervals is reached.  The integrand must
/// be finite at interior points; endpoints are never evaluated.
template <class F>
Estimate integrate(F&& f, double lo, double hi, double rel_tol, double abs_tol = 0.0,
                   int max_intervals = 2000) {
  struct Piece {
    double lo, hi;
    Estimate est;
    bool operator<(const Piece& o) const { return est.error < o.est.error; }
  };
  if (lo == hi) return {};
  std::priority_queue<Piece> heap;
  Estimate total = detail::gk15(f, lo, hi);
  heap.push({lo, hi, total});
  int evaluations = total.evaluations;
  while (static_cast<int>(heap.size()) < max_intervals &&
         total.error > std::max(abs_tol, rel_tol * std::abs(total.value))) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Estimate left = detail::gk15(f, worst.lo, mid);
    const Estimate right = detail::gk15(f, mid, worst.hi);
    evaluations += left.evaluations + right.evaluations;
    total.value += left.value + right.value - worst.est.value;
    total.error += left.error + right.error - worst.est.error;
    heap.push({worst.lo, mid, left});
    heap.push({mid, worst.hi, right});
  }
  // Re-sum to shed the drift of the incremental updates.
  Estimate out;
  while (!heap.empty()) {
    out.value += heap.top().est.value;
    out.error += heap.top().est.error;
    heap.pop();
  }
  out.evaluations = evaluations;
  return out;
}

}  // namespace kerr::quad
