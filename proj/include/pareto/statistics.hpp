#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pareto/analytics.hpp"

namespace pareto::stats {

/// Reference distribution for goodness-of-fit checks.
struct Reference {
  enum class Kind { uniform, gumbel, normal, exponential };

  Kind kind = Kind::uniform;
  double a = 0.0;  ///< lower end / location / mean / rate
  double b = 1.0;  ///< upper end / scale / sd / unused

  static Reference uniform(double lo = 0.0, double hi = 1.0) { return {Kind::uniform, lo, hi}; }
  static Reference gumbel(double loc = 0.0, double scale = 1.0) { return {Kind::gumbel, loc, scale}; }
  static Reference normal(double mean = 0.0, double sd = 1.0) { return {Kind::normal, mean, sd}; }
  static Reference exponential(double rate = 1.0) { return {Kind::exponential, rate, 0.0}; }

  double cdf(double x) const {
    switch (kind) {
      case Kind::uniform:
        return x <= a ? 0.0 : x >= b ? 1.0 : (x - a) / (b - a);
      case Kind::gumbel:
        return analytics::gumbel_cdf((x - a) / b);
      case Kind::normal:
        return analytics::normal_cdf((x - a) / b);
      case Kind::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  std::string name() const {
    switch (kind) {
      case Kind::uniform: return "uniform";
      case Kind::gumbel: return "gumbel";
      case Kind::normal: return "normal";
      case Kind::exponential: return "exponential";
    }
    return "unknown";
  }
};

/// Two-sided Kolmogorov-Smirnov distance sup_x |F_N(x) - F(x)|. At each
/// sorted sample x_(i) both step values (i-1)/N and i/N are compared.
inline double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return worst;
}

inline double ks_statistic(std::span<const double> samples, const Reference& ref) {
  return ks_statistic(samples, [&](double v) { return ref.cdf(v); });
}

/// Null 95% quantile of the KS distance, asymptotic form 1.358 / sqrt(N).
inline double ks_critical_95(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

inline double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double stddev(std::span<const double> v) {
  if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Linear-interpolation quantile of an ascending-sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> v, double q) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, q);
}

inline double median(std::span<const double> v) { return quantile(v, 0.5); }

struct Summary {
  std::size_t count = 0;
  double mean = 0.0, sd = 0.0, min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
};

/// Summary of the finite entries of v.
inline Summary summarize(std::span<const double> v) {
  std::vector<double> s;
  s.reserve(v.size());
  for (double x : v)
    if (std::isfinite(x)) s.push_back(x);
  std::sort(s.begin(), s.end());
  Summary out;
  out.count = s.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.empty()) {
    out.mean = out.sd = out.min = out.q25 = out.median = out.q75 = out.max = nan;
    return out;
  }
  out.mean = mean(s);
  out.sd = stddev(s);
  out.min = s.front();
  out.q25 = quantile_sorted(s, 0.25);
  out.median = quantile_sorted(s, 0.5);
  out.q75 = quantile_sorted(s, 0.75);
  out.max = s.back();
  return out;
}

}  // namespace pareto::stats
