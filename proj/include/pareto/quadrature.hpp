#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace pareto::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-index Kronrod nodes 1, 3, 5 and the centre.
inline constexpr double kWg[4] = {0.129484966168869693270611432679082,
                                  0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975,
                                  0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

}  // namespace detail

/// 15-point Kronrod rule on [a, b] with the embedded 7-point Gauss rule as
/// error estimate.
template <class F>
Result gauss_kronrod15(F&& f, double a, double b) {
  using namespace detail;
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 1, true};
}

/// Globally adaptive Gauss-Kronrod integration over [breaks.front(), breaks.back()],
/// starting from the given partition. Panels with the largest error estimate
/// are bisected until the total error is within max(abs_tol, rel_tol * |I|).
template <class F>
Result integrate(F&& f, std::span<const double> breaks, double rel_tol, double abs_tol = 0.0,
                 std::size_t max_panels = 4000) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate: need at least two break points");
  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    const Result r = gauss_kronrod15(f, breaks[i], breaks[i + 1]);
    heap.push({breaks[i], breaks[i + 1], r.value, r.error});
    total += r.value;
    error += r.error;
  }
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(total)) &&
         heap.size() < max_panels) {
    const detail::Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    const Result left = gauss_kronrod15(f, p.a, mid);
    const Result right = gauss_kronrod15(f, mid, p.b);
    total += left.value + right.value - p.value;
    error += left.error + right.error - p.error;
    heap.push({p.a, mid, left.value, left.error});
    heap.push({mid, p.b, right.value, right.error});
  }
  // Re-sum from the panels to shed the drift of the running updates.
  double value = 0.0;
  double err = 0.0;
  const std::size_t panels = heap.size();
  std::vector<detail::Panel> all;
  all.reserve(panels);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& p : all) {
    value += p.value;
    err += p.error;
  }
  return {value, err, panels, err <= std::max(abs_tol, rel_tol * std::abs(value))};
}

template <class F>
Result integrate(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0) {
  const double breaks[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), rel_tol, abs_tol);
}

}  // namespace pareto::quad
