#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pareto/point.hpp"

namespace pareto {

/// Nonnegative integer lattice point.
struct IntegerGridPoint {
  std::vector<std::int64_t> coords;

  std::int64_t sum() const noexcept {
    return std::accumulate(coords.begin(), coords.end(), std::int64_t{0});
  }
  friend bool operator==(const IntegerGridPoint&, const IntegerGridPoint&) = default;
};

inline constexpr double kSweetenTolerance = 1e-9;

/// Round x up to a lattice point i >= x on the hyperplane i_+ = 2m - (d-1),
/// given x_+ = 2m - 2(d-1) and m >= d-1. Then the open orthant above i is
/// contained in the open orthant above x.
///
/// Starts from the componentwise ceilings and adds 1 to the lowest-index
/// coordinates until the target sum is reached. Coordinates within the
/// tolerance above an integer are treated as that integer.
inline IntegerGridPoint sweeten(const Point& x, std::int64_t m) {
  const auto d = static_cast<std::int64_t>(x.dim());
  if (m < 1 || m < d - 1) throw std::invalid_argument("sweeten: requires m >= max(1, d - 1)");
  const double expected = static_cast<double>(2 * m - 2 * (d - 1));
  if (std::abs(x.sum() - expected) > kSweetenTolerance)
    throw std::invalid_argument("sweeten: x_+ must equal 2m - 2(d - 1)");

  IntegerGridPoint i;
  i.coords.reserve(x.dim());
  for (double v : x.coords())
    i.coords.push_back(std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(v - kSweetenTolerance))));
  const std::int64_t target = 2 * m - (d - 1);
  std::int64_t deficit = target - i.sum();
  if (deficit < 0 || deficit > d - 1)
    throw std::logic_error("sweeten: ceiling sum outside the expected range");
  for (std::size_t j = 0; deficit > 0; ++j, --deficit) ++i.coords[j];
  return i;
}

/// Upper bound on P(F-_n <= b) obtained by covering the hyperplane x_+ = b
/// with finitely many lattice orthants:
///   m = ceil((d-1) ln n / (ln n - b)),  bound = C(2m, d-1) exp(-n^((d-1)/(2m))).
/// Diagnostic only. Refused in d = 1, where the construction degenerates.
inline double lower_bound_probability(double n, double b, std::size_t d) {
  if (d < 2) throw std::invalid_argument("lower_bound_probability: requires d >= 2");
  if (!(n > 1.0)) throw std::invalid_argument("lower_bound_probability: requires n > 1");
  const double ln_n = std::log(n);
  if (!(b >= 0.0) || !(b < ln_n))
    throw std::invalid_argument("lower_bound_probability: requires 0 <= b < ln n");
  const double dm1 = static_cast<double>(d - 1);
  const auto m = static_cast<std::int64_t>(std::ceil(dm1 * ln_n / (ln_n - b)));
  // C(2m, d-1) exactly for moderate sizes.
  double count = 1.0;
  for (std::int64_t k = 1; k <= static_cast<std::int64_t>(d - 1); ++k)
    count = count * static_cast<double>(2 * m - k + 1) / static_cast<double>(k);
  return count * std::exp(-std::exp(dm1 / (2.0 * static_cast<double>(m)) * ln_n));
}

}  // namespace pareto
