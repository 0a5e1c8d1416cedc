#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pareto/quadrature.hpp"
#include "pareto/random.hpp"

namespace pareto::analytics {

inline constexpr double kEulerGamma = std::numbers::egamma;

/// Largest n for which p_record uses the alternating binomial sum.
inline constexpr std::uint64_t kAlternatingSumMaxN = 30;

/// Relative tolerance of the quadrature branch of p_record.
inline constexpr double kRecordProbabilityRelTol = 1e-12;

/// Gamma^(j)(1), j = 0..6.
inline constexpr std::array<double, 7> kGammaDerivativesAtOne = {
    1.0,
    -0.5772156649015328606065121,
    1.978111990655945110790791,
    -5.444874456485317734099361,
    23.56147408402560449607313,
    -117.8394082683774242525642,
    715.0673625273188590707844,
};

inline double gamma_derivative(int j) {
  if (j < 0 || j >= static_cast<int>(kGammaDerivativesAtOne.size()))
    throw std::out_of_range("gamma_derivative: j must be in [0, 6]");
  return kGammaDerivativesAtOne[static_cast<std::size_t>(j)];
}

/// Per-dimension constants used by the count asymptotics.
struct AnalyticContext {
  std::size_t d = 1;
  double euler_gamma = kEulerGamma;
  std::array<double, 7> gamma_derivs = kGammaDerivativesAtOne;
  /// Leading variance constant of R_n, keyed by d. Only d = 1 and d = 2 are known in closed form.
  std::map<std::size_t, double> known_var_constants = {
      {1, 1.0}, {2, std::numbers::pi * std::numbers::pi / 6.0 + 0.5}};

  explicit AnalyticContext(std::size_t dim) : d(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  std::optional<double> records_variance_constant() const {
    const auto it = known_var_constants.find(d);
    if (it == known_var_constants.end()) return std::nullopt;
    return it->second;
  }
};

inline double log_factorial(std::size_t k) noexcept {
  double s = 0.0;
  for (std::size_t i = 2; i <= k; ++i) s += std::log(static_cast<double>(i));
  return s;
}

namespace detail {

inline void check_nd(std::uint64_t n, std::size_t d) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}

// ln of y^(d-1)/(d-1)! e^-y (1 - e^-y)^(n-1).
inline double log_record_integrand(std::uint64_t n, std::size_t d, double log_fact_dm1, double y) {
  if (!(y > 0.0)) return -std::numeric_limits<double>::infinity();
  double v = -y - log_fact_dm1;
  if (d > 1) v += static_cast<double>(d - 1) * std::log(y);
  if (n > 1) v += static_cast<double>(n - 1) * std::log1p(-std::exp(-y));
  return v;
}

inline std::vector<double> record_integrand_breaks(std::uint64_t n, std::size_t d) {
  const double l = std::log(static_cast<double>(n));
  const double top = l + 60.0 + 5.0 * static_cast<double>(d);
  std::vector<double> breaks = {0.0};
  for (double b : {l - 6.0, l - 2.0, l, l + 2.0, l + 6.0, l + 15.0, l + 30.0}) {
    if (b > breaks.back() + 0.25 && b < top) breaks.push_back(b);
  }
  breaks.push_back(top);
  return breaks;
}

}  // namespace detail

/// P(X(n) sets a record) by the alternating binomial sum
///   sum_{k=0}^{n-1} (-1)^k C(n-1, k) (k+1)^(-d),
/// accumulated in extended precision. Accurate only for small n (cancellation).
inline double p_record_alternating(std::uint64_t n, std::size_t d) {
  detail::check_nd(n, d);
  if (n > 60) throw std::domain_error("p_record_alternating: n too large for the alternating sum");
  long double total = 0.0L;
  std::uint64_t binom = 1;  // C(n-1, k)
  for (std::uint64_t k = 0; k < n; ++k) {
    const long double term =
        static_cast<long double>(binom) / std::pow(static_cast<long double>(k + 1), static_cast<long double>(d));
    total += (k % 2 == 0) ? term : -term;
    binom = binom * (n - 1 - k) / (k + 1);
  }
  return static_cast<double>(total);
}

/// P(X(n) sets a record) as the integral over the coordinate sum y of
///   y^(d-1)/(d-1)! e^-y (1 - e^-y)^(n-1),
/// evaluated in log space by adaptive Gauss-Kronrod quadrature.
inline double p_record_quadrature(std::uint64_t n, std::size_t d) {
  detail::check_nd(n, d);
  const double lf = log_factorial(d - 1);
  const auto breaks = detail::record_integrand_breaks(n, d);
  const auto r = quad::integrate(
      [&](double y) { return std::exp(detail::log_record_integrand(n, d, lf, y)); },
      std::span<const double>(breaks), kRecordProbabilityRelTol, 1e-300);
  return r.value;
}

/// p_n: probability that the n-th observation sets a record.
inline double p_record(std::uint64_t n, std::size_t d) {
  detail::check_nd(n, d);
  if (n <= kAlternatingSumMaxN) return p_record_alternating(n, d);
  return p_record_quadrature(n, d);
}

/// E r_n = n p_n.
inline double mean_remaining(std::uint64_t n, std::size_t d) {
  return static_cast<double>(n) * p_record(n, d);
}

namespace detail {

class RecordMeanCache {
 public:
  double get(std::uint64_t n, std::size_t d) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& prefix = tables_[d];
    if (prefix.empty()) prefix.push_back(0.0);
    while (prefix.size() <= n) {
      const auto m = static_cast<std::uint64_t>(prefix.size());
      prefix.push_back(prefix.back() + p_record(m, d));
    }
    return prefix[n];
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::vector<double>> tables_;
};

inline RecordMeanCache& record_mean_cache() {
  static RecordMeanCache cache;
  return cache;
}

}  // namespace detail

/// E R_n = sum_{m=1}^n p_m, from a process-wide prefix-sum cache. Extending
/// the cache to n costs one p_record evaluation per new term.
inline double mean_records(std::uint64_t n, std::size_t d) {
  detail::check_nd(n, d);
  return detail::record_mean_cache().get(n, d);
}

/// Density of Y_n, the coordinate sum of X(n) conditioned on it setting a record.
inline double y_density(std::uint64_t n, std::size_t d, double y) {
  detail::check_nd(n, d);
  if (!(y > 0.0)) return 0.0;
  const double lp = std::log(p_record(n, d));
  return std::exp(detail::log_record_integrand(n, d, log_factorial(d - 1), y) - lp);
}

/// Inverse-CDF sampler for Y_n. The CDF is tabulated once on a grid of
/// quarter-unit cells; a draw locates its cell and bisects inside it,
/// integrating the density from the cell's left edge.
class YSampler {
  struct Density {
    const YSampler* self;
    double operator()(double y) const {
      return std::exp(detail::log_record_integrand(self->n_, self->d_, self->log_fact_, y) -
                      self->log_p_);
    }
  };
  Density density() const noexcept { return {this}; }

 public:
  static constexpr double kCell = 0.25;
  static constexpr double kTolerance = 1e-10;

  YSampler(std::uint64_t n, std::size_t d)
      : n_(n), d_(d), log_fact_(log_factorial(d - 1)) {
    detail::check_nd(n, d);
    log_p_ = std::log(p_record(n, d));
    const double top = std::log(static_cast<double>(n)) + 60.0 + 5.0 * static_cast<double>(d);
    const auto cells = static_cast<std::size_t>(std::ceil(top / kCell));
    cum_.reserve(cells + 1);
    cum_.push_back(0.0);
    for (std::size_t k = 0; k < cells; ++k) {
      const double a = kCell * static_cast<double>(k);
      const auto r = quad::integrate(density(), a, a + kCell, 1e-13, 1e-18);
      cum_.push_back(cum_.back() + r.value);
    }
  }

  /// Tabulated total mass; 1 up to quadrature error.
  double total_mass() const noexcept { return cum_.back(); }

  double cdf(double y) const {
    if (!(y > 0.0)) return 0.0;
    const auto k = static_cast<std::size_t>(y / kCell);
    if (k + 1 >= cum_.size()) return 1.0;
    const double a = kCell * static_cast<double>(k);
    return (cum_[k] + quad::gauss_kronrod15(density(), a, y).value) / total_mass();
  }

  double sample(RandomStream& stream) const {
    const double target = stream.next_uniform() * total_mass();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - cum_.begin()) - 1));
    double lo = kCell * static_cast<double>(k);
    double hi = lo + kCell;
    const double left = lo;
    const double need = target - cum_[std::min(k, cum_.size() - 1)];
    while (hi - lo > kTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (quad::gauss_kronrod15(density(), left, mid).value < need)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::uint64_t n_;
  std::size_t d_;
  double log_fact_;
  double log_p_ = 0.0;
  std::vector<double> cum_;
};

/// One draw of Y_n. Builds a sampler per call; use YSampler for many draws.
inline double sample_y(RandomStream& stream, std::uint64_t n, std::size_t d) {
  return YSampler(n, d).sample(stream);
}

inline double gumbel_cdf(double x) noexcept { return std::exp(-std::exp(-x)); }

inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// ln n + (d-1) ln ln n - ln((d-1)!): centering of F+_n.
inline double fplus_centering(double n, std::size_t d) {
  if (!(n >= 3.0)) throw std::domain_error("fplus_centering: requires n >= 3");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double l = std::log(n);
  return l + static_cast<double>(d - 1) * std::log(l) - log_factorial(d - 1);
}

/// (d! m)^(1/d) - gamma: centering of ln T_m.
inline double tm_centering(double m, std::size_t d) {
  if (!(m >= 2.0)) throw std::domain_error("tm_centering: requires m >= 2");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double dd = static_cast<double>(d);
  return std::exp((log_factorial(d) + std::log(m)) / dd) - kEulerGamma;
}

/// (d! m)^(1/d) + (1 - 1/d) ln m + ln d - (1/d) ln d! - gamma: centering of
/// F+ at the m-th record epoch, d >= 3.
inline double records_time_fplus_centering(double m, std::size_t d) {
  if (!(m >= 2.0)) throw std::domain_error("records_time_fplus_centering: requires m >= 2");
  if (d < 3) throw std::domain_error("records_time_fplus_centering: requires d >= 3");
  const double dd = static_cast<double>(d);
  const double lf = log_factorial(d);
  return std::exp((lf + std::log(m)) / dd) + (1.0 - 1.0 / dd) * std::log(m) + std::log(dd) -
         lf / dd - kEulerGamma;
}

/// Truncated expansion (ln n)^d sum_{j=0}^{order} (-1)^j Gamma^(j)(1) / (j! (d-j)!) (ln n)^(-j) of E R_n.
inline double asym_mean_records(double n, std::size_t d, std::size_t order) {
  if (order > d) throw std::invalid_argument("asym_mean_records: order must be <= d");
  if (order >= kGammaDerivativesAtOne.size())
    throw std::out_of_range("asym_mean_records: order must be <= 6");
  if (!(n >= 3.0)) throw std::domain_error("asym_mean_records: requires n >= 3");
  const double l = std::log(n);
  double s = 0.0;
  for (std::size_t j = 0; j <= order; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    s += sign * kGammaDerivativesAtOne[j] /
         std::exp(log_factorial(j) + log_factorial(d - j)) * std::pow(l, -static_cast<double>(j));
  }
  return std::pow(l, static_cast<double>(d)) * s;
}

}  // namespace pareto::analytics
