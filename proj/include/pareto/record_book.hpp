#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pareto/point.hpp"

namespace pareto {

struct ObserveOutcome {
  bool is_record = false;
  std::size_t kills = 0;  ///< current records strictly dominated by the new point
};

/// Read-only view of a set of d-dimensional points stored row-major.
struct RecordView {
  std::size_t dim = 0;
  std::span<const double> flat;

  std::size_t size() const noexcept { return dim == 0 ? 0 : flat.size() / dim; }
  bool empty() const noexcept { return flat.empty(); }
  std::span<const double> row(std::size_t i) const noexcept { return flat.subspan(i * dim, dim); }
};

/// Bounded descending list of the largest coordinate sums seen so far.
class TopSums {
 public:
  explicit TopSums(std::size_t capacity) : capacity_(capacity) { values_.reserve(capacity); }

  void push(double s) {
    if (capacity_ == 0) return;
    if (values_.size() == capacity_) {
      if (!(s > values_.back())) return;
      values_.pop_back();
    }
    values_.insert(std::upper_bound(values_.begin(), values_.end(), s, std::greater<>{}), s);
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const TopSums&, const TopSums&) = default;

 private:
  std::size_t capacity_;
  std::vector<double> values_;
};

class RecordBook;
RecordBook rebuild_oracle(std::span<const Point> points, std::size_t top_capacity);

/// Incrementally maintained set of current Pareto records plus the record
/// counters n, R_n, r_n, beta_n, the record epochs T_1 < T_2 < ..., the
/// per-coordinate maxima B+_n(j), and the top coordinate sums.
///
/// Records are kept in order of creation in a flat row-major array and
/// scanned linearly; r_n grows like (ln n)^(d-1)/(d-1)!, so the list stays
/// short at the sizes this library targets.
class RecordBook {
 public:
  static constexpr std::size_t kDefaultTopCapacity = 64;

  explicit RecordBook(std::size_t d, std::size_t top_capacity = kDefaultTopCapacity)
      : d_(d), dim_max_(d, 0.0), top_(top_capacity) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  ObserveOutcome observe(std::span<const double> p) {
    if (p.size() != d_) throw DimensionMismatch(d_, p.size());
    ++n_;
    for (std::size_t j = 0; j < d_; ++j) dim_max_[j] = std::max(dim_max_[j], p[j]);
    top_.push(coordinate_sum(p));

    const std::size_t r = set_times_.size();
    const double* base = coords_.data();
    if (hint_ < r && detail::dominates_raw(base + hint_ * d_, p.data(), d_)) return {};
    for (std::size_t i = 0; i < r; ++i) {
      if (detail::dominates_raw(base + i * d_, p.data(), d_)) {
        hint_ = i;
        return {};
      }
    }

    // New record: drop every current record it strictly dominates, keeping
    // creation order for the survivors.
    std::size_t kept = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const double* rec = coords_.data() + i * d_;
      if (detail::dominates_raw(p.data(), rec, d_)) continue;
      if (kept != i) {
        std::copy(rec, rec + d_, coords_.begin() + static_cast<std::ptrdiff_t>(kept * d_));
        set_times_[kept] = set_times_[i];
      }
      ++kept;
    }
    const std::size_t kills = r - kept;
    coords_.resize(kept * d_);
    set_times_.resize(kept);
    coords_.insert(coords_.end(), p.begin(), p.end());
    set_times_.push_back(n_);
    epochs_.push_back(n_);
    broken_ += kills;
    hint_ = kept;
    return {true, kills};
  }

  ObserveOutcome observe(const Point& p) { return observe(p.coords()); }

  std::size_t dim() const noexcept { return d_; }
  std::uint64_t n() const noexcept { return n_; }
  /// R_n: records set through time n.
  std::uint64_t total_records() const noexcept { return epochs_.size(); }
  /// r_n: current (remaining) records.
  std::uint64_t remaining() const noexcept { return set_times_.size(); }
  /// beta_n: broken records.
  std::uint64_t broken() const noexcept { return broken_; }

  std::span<const std::uint64_t> epochs() const noexcept { return epochs_; }
  std::span<const double> dim_max() const noexcept { return dim_max_; }
  std::span<const double> top_sums() const noexcept { return top_.values(); }
  std::size_t top_capacity() const noexcept { return top_.capacity(); }

  std::size_t record_count() const noexcept { return set_times_.size(); }
  std::span<const double> record(std::size_t i) const noexcept {
    return std::span<const double>(coords_).subspan(i * d_, d_);
  }
  std::uint64_t record_time(std::size_t i) const noexcept { return set_times_[i]; }
  RecordView view() const noexcept { return {d_, coords_}; }

  std::vector<Point> records() const {
    std::vector<Point> out;
    out.reserve(record_count());
    for (std::size_t i = 0; i < record_count(); ++i) out.emplace_back(record(i));
    return out;
  }

  /// Counters, records (with set times, in creation order), epochs, maxima
  /// and top sums all equal. The dominance-scan hint is not compared.
  friend bool operator==(const RecordBook& a, const RecordBook& b) {
    return a.d_ == b.d_ && a.n_ == b.n_ && a.broken_ == b.broken_ && a.coords_ == b.coords_ &&
           a.set_times_ == b.set_times_ && a.epochs_ == b.epochs_ && a.dim_max_ == b.dim_max_ &&
           a.top_ == b.top_;
  }

 private:
  friend RecordBook rebuild_oracle(std::span<const Point> points, std::size_t top_capacity);

  std::size_t d_;
  std::uint64_t n_ = 0;
  std::uint64_t broken_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint64_t> set_times_;
  std::vector<std::uint64_t> epochs_;
  std::vector<double> dim_max_;
  TopSums top_;
  std::size_t hint_ = 0;
};

/// Quadratic-time reference construction of a RecordBook straight from the
/// record definitions: X(k) is a record iff no earlier observation strictly
/// dominates it, and a current record iff no observation up to n does.
inline RecordBook rebuild_oracle(std::span<const Point> points,
                                 std::size_t top_capacity = RecordBook::kDefaultTopCapacity) {
  if (points.empty()) return RecordBook(1, top_capacity);
  const std::size_t d = points.front().dim();
  for (const Point& p : points) {
    if (p.dim() != d) throw DimensionMismatch(d, p.dim());
  }
  RecordBook book(d, top_capacity);
  const std::size_t n = points.size();
  std::vector<double> sums;
  sums.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    bool record = true;
    for (std::size_t i = 0; i < k && record; ++i) {
      if (strictly_dominates(points[i], points[k])) record = false;
    }
    if (!record) continue;
    book.epochs_.push_back(k + 1);
    bool current = true;
    for (std::size_t i = k + 1; i < n && current; ++i) {
      if (strictly_dominates(points[i], points[k])) current = false;
    }
    if (current) {
      book.coords_.insert(book.coords_.end(), points[k].coords().begin(), points[k].coords().end());
      book.set_times_.push_back(k + 1);
    } else {
      ++book.broken_;
    }
  }
  for (const Point& p : points) {
    for (std::size_t j = 0; j < d; ++j) book.dim_max_[j] = std::max(book.dim_max_[j], p[j]);
    sums.push_back(p.sum());
  }
  std::sort(sums.begin(), sums.end(), std::greater<>{});
  TopSums top(top_capacity);
  for (std::size_t i = 0; i < std::min(top_capacity, sums.size()); ++i) top.push(sums[i]);
  book.top_ = top;
  book.n_ = n;
  return book;
}

}  // namespace pareto
