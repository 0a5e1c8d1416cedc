#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pareto {

namespace testing {
// Fault-injection hook for the self-test: when set, strictly_dominates
// returns the negation of the true answer.
inline std::atomic<bool> flip_dominance{false};
}  // namespace testing

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

/// Sum of coordinates, accumulated left to right from 0.0.
///
/// Every routine that compares coordinate sums goes through this function so
/// that equal coordinate vectors always produce bit-identical sums.
inline double coordinate_sum(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

/// A d-dimensional observation with finite, nonnegative coordinates.
class Point {
 public:
  Point() = default;

  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }

  Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }

  explicit Point(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
    validate();
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t j) const noexcept { return coords_[j]; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// x_+ : the coordinate sum.
  double sum() const noexcept { return coordinate_sum(coords_); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  void validate() const {
    if (coords_.empty()) throw std::invalid_argument("point must have dimension >= 1");
    for (double v : coords_) {
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("point coordinates must be finite and nonnegative");
    }
  }

  std::vector<double> coords_;
};

namespace detail {

// b ≺ a, no checks. Hot path of RecordBook::observe.
inline bool dominates_raw(const double* a, const double* b, std::size_t d) noexcept {
  for (std::size_t j = 0; j < d; ++j) {
    if (!(b[j] < a[j])) return false;
  }
  return true;
}

// Some coordinate of x reaches the corresponding coordinate of r, i.e. r does
// not strictly dominate x.
inline bool blocks_raw(const double* x, const double* r, std::size_t d) noexcept {
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] >= r[j]) return true;
  }
  return false;
}

}  // namespace detail

/// True iff b_j < a_j for every j. Equality in any coordinate blocks domination.
inline bool strictly_dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  const bool result = detail::dominates_raw(a.data(), b.data(), a.size());
  if (testing::flip_dominance.load(std::memory_order_relaxed)) return !result;
  return result;
}

inline bool strictly_dominates(const Point& a, const Point& b) {
  return strictly_dominates(a.coords(), b.coords());
}

}  // namespace pareto
