#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pareto/point.hpp"
#include "pareto/record_book.hpp"

namespace pareto {

/// Frontier extremes and bounding processes at one time n.
struct FrontierSummary {
  double f_minus = 0.0;
  double f_plus = 0.0;
  double width = 0.0;
  std::vector<double> dim_max;
  /// bhat[m-1] is the m-th largest coordinate sum; NaN where m > n.
  std::vector<double> bhat;
};

/// Lowest point of the frontier: its coordinate sum and a corner achieving it.
struct MinCorner {
  double value = 0.0;
  std::vector<double> witness;
};

/// Maximum coordinate sum over the current records, which is also the
/// maximum over every observation seen. 0 for an empty book.
inline double f_plus(const RecordBook& book) {
  double best = 0.0;
  for (std::size_t i = 0; i < book.record_count(); ++i)
    best = std::max(best, coordinate_sum(book.record(i)));
  return best;
}

/// x lies in the closed record-setting region: no current record strictly
/// dominates it, i.e. every record is blocked in some coordinate.
inline bool in_rs(const RecordBook& book, std::span<const double> x) {
  if (x.size() != book.dim()) throw DimensionMismatch(book.dim(), x.size());
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("in_rs: point must be nonnegative");
  }
  for (std::size_t i = 0; i < book.record_count(); ++i) {
    if (!detail::blocks_raw(x.data(), book.record(i).data(), book.dim())) return false;
  }
  return true;
}

inline bool in_rs(const RecordBook& book, const Point& x) { return in_rs(book, x.coords()); }

/// m-th largest coordinate sum among all n observations.
inline double bhat(const RecordBook& book, std::size_t m) {
  if (m < 1) throw std::invalid_argument("bhat: m must be >= 1");
  if (m > book.top_capacity())
    throw std::out_of_range("bhat: m exceeds the top-sum tracker capacity");
  if (m > book.n()) throw std::out_of_range("bhat: m exceeds the number of observations");
  return book.top_sums()[m - 1];
}

// The lowest frontier point is found through the covering form of the
// record-setting region: x belongs to the closed region iff every current
// record r has some j with x_j >= r_j. Minimizing x_+ therefore amounts to
// assigning each record to one coordinate and paying, per coordinate, the
// largest value assigned to it.
namespace detail {

inline bool covered(std::span<const double> x, const double* r) noexcept {
  return blocks_raw(x.data(), r, x.size());
}

inline MinCorner single_coordinate_corner(RecordView recs) {
  MinCorner best{std::numeric_limits<double>::infinity(), {}};
  const std::size_t d = recs.dim;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> x(d, 0.0);
    for (std::size_t i = 0; i < recs.size(); ++i) x[j] = std::max(x[j], recs.row(i)[j]);
    const double s = coordinate_sum(x);
    if (s < best.value) best = {s, std::move(x)};
  }
  return best;
}

class CoverSearch {
 public:
  CoverSearch(RecordView recs, double stop_at) : recs_(recs), d_(recs.dim), stop_at_(stop_at) {
    order_.resize(recs.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<double> key(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto row = recs.row(i);
      key[i] = *std::min_element(row.begin(), row.end());
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    cur_.assign(d_, 0.0);
  }

  MinCorner run(MinCorner incumbent) {
    best_ = std::move(incumbent);
    if (best_.value <= stop_at_) return best_;
    search(0);
    return best_;
  }

 private:
  const double* rec(std::size_t k) const noexcept { return recs_.row(order_[k]).data(); }

  void search(std::size_t start) {
    if (done_) return;
    std::size_t k = start;
    while (k < order_.size() && covered(cur_, rec(k))) ++k;
    if (k == order_.size()) {
      const double s = coordinate_sum(cur_);
      if (s < best_.value) {
        best_ = {s, cur_};
        if (s <= stop_at_) done_ = true;
      }
      return;
    }

    // Bound: each still-uncovered record forces at least its cheapest raise.
    const double base = coordinate_sum(cur_);
    double need = 0.0;
    for (std::size_t q = k; q < order_.size(); ++q) {
      const double* r = rec(q);
      if (covered(cur_, r)) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < d_; ++j) cheapest = std::min(cheapest, r[j] - cur_[j]);
      need = std::max(need, cheapest);
    }
    // The slack keeps rounding in the bound from pruning a true improvement.
    if (base + need >= best_.value + 1e-12 * std::max(1.0, std::abs(best_.value))) return;

    const double* r = rec(k);
    std::vector<std::size_t> dims(d_);
    std::iota(dims.begin(), dims.end(), std::size_t{0});
    std::sort(dims.begin(), dims.end(), [&](std::size_t a, std::size_t b) {
      return r[a] - cur_[a] < r[b] - cur_[b];
    });
    for (std::size_t j : dims) {
      const double saved = cur_[j];
      cur_[j] = r[j];
      search(k + 1);
      cur_[j] = saved;
      if (done_) return;
    }
  }

  RecordView recs_;
  std::size_t d_;
  double stop_at_;
  std::vector<std::size_t> order_;
  std::vector<double> cur_;
  MinCorner best_;
  bool done_ = false;
};

}  // namespace detail

/// Exact lowest frontier point for d = 2 by sweeping the staircase corners.
///
/// With records sorted by first coordinate, a first threshold t1 covers a
/// prefix of them and the second threshold must be the largest second
/// coordinate of the remaining suffix.
inline MinCorner f_minus_staircase(RecordView recs) {
  if (recs.dim != 2) throw std::invalid_argument("staircase sweep requires d = 2");
  const std::size_t r = recs.size();
  if (r == 0) return {0.0, {0.0, 0.0}};
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return recs.row(a)[0] < recs.row(b)[0];
  });
  std::vector<double> suffix_max(r + 1, 0.0);
  for (std::size_t k = r; k-- > 0;)
    suffix_max[k] = std::max(suffix_max[k + 1], recs.row(order[k])[1]);

  MinCorner best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t k = 0; k <= r; ++k) {
    const double t1 = k == 0 ? 0.0 : recs.row(order[k - 1])[0];
    const double c[2] = {t1, suffix_max[k]};
    const double s = coordinate_sum(c);
    if (s < best.value) best = {s, {c[0], c[1]}};
  }
  return best;
}

/// Exact lowest frontier point by branch-and-bound over record-to-coordinate
/// assignments. Records are branched in decreasing order of their smallest
/// coordinate; records already covered by the running maxima are skipped.
///
/// `known_lower` is a value the optimum cannot go below; the search stops as
/// soon as it finds a corner that attains it.
inline MinCorner f_minus_branch_and_bound(
    RecordView recs, double known_lower = -std::numeric_limits<double>::infinity(),
    std::optional<MinCorner> warm_start = std::nullopt) {
  if (recs.dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (recs.empty()) return {0.0, std::vector<double>(recs.dim, 0.0)};
  MinCorner incumbent = detail::single_coordinate_corner(recs);
  if (warm_start && warm_start->witness.size() == recs.dim) {
    bool feasible = true;
    for (std::size_t i = 0; i < recs.size() && feasible; ++i)
      feasible = detail::covered(warm_start->witness, recs.row(i).data());
    if (feasible && warm_start->value < incumbent.value) incumbent = *warm_start;
  }
  return detail::CoverSearch(recs, known_lower).run(std::move(incumbent));
}

inline MinCorner f_minus_corner(RecordView recs) {
  if (recs.empty()) return {0.0, std::vector<double>(recs.dim, 0.0)};
  if (recs.dim == 2) return f_minus_staircase(recs);
  return f_minus_branch_and_bound(recs);
}

/// F-_n: minimum coordinate sum over the frontier. 0 for an empty book.
inline double f_minus(const RecordBook& book) { return f_minus_corner(book.view()).value; }

namespace detail {

inline std::vector<double> flatten(std::span<const Point> records, std::size_t& d) {
  d = records.empty() ? 0 : records.front().dim();
  std::vector<double> flat;
  flat.reserve(records.size() * d);
  for (const Point& p : records) {
    if (p.dim() != d) throw DimensionMismatch(d, p.dim());
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return flat;
}

}  // namespace detail

inline constexpr std::size_t kBruteForceMaxRecords = 12;

/// Exhaustive minimum over all d^r record-to-coordinate assignments.
/// Reference implementation for tests; refuses more than 12 records.
inline double f_minus_bruteforce(std::span<const Point> records) {
  if (records.size() > kBruteForceMaxRecords)
    throw std::length_error("f_minus_bruteforce: at most 12 records");
  if (records.empty()) return 0.0;
  std::size_t d = 0;
  const std::vector<double> flat = detail::flatten(records, d);
  const std::size_t r = records.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> maxima(r + 1, std::vector<double>(d, 0.0));
  // Depth-first enumeration; maxima[k] holds the per-coordinate maxima after
  // assigning the first k records.
  auto visit = [&](auto&& self, std::size_t k) -> void {
    if (k == r) {
      best = std::min(best, coordinate_sum(maxima[r]));
      return;
    }
    for (std::size_t j = 0; j < d; ++j) {
      maxima[k + 1] = maxima[k];
      maxima[k + 1][j] = std::max(maxima[k + 1][j], flat[k * d + j]);
      self(self, k + 1);
    }
  };
  visit(visit, 0);
  return best;
}

/// Minimum coordinate sum over the candidate grid whose coordinates are 0 or
/// some record's coordinate, keeping candidates in the closed record-setting
/// region. Independent reference for f_minus; cost (r+1)^d * r * d.
inline double f_minus_candidate_grid(std::span<const Point> records) {
  if (records.empty()) return 0.0;
  std::size_t d = 0;
  const std::vector<double> flat = detail::flatten(records, d);
  const std::size_t r = records.size();
  double cells = 1.0;
  for (std::size_t j = 0; j < d; ++j) cells *= static_cast<double>(r + 1);
  if (cells > 5e7) throw std::length_error("f_minus_candidate_grid: grid too large");

  std::vector<std::vector<double>> values(d);
  for (std::size_t j = 0; j < d; ++j) {
    values[j].push_back(0.0);
    for (std::size_t i = 0; i < r; ++i) values[j].push_back(flat[i * d + j]);
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d, 0.0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t j = 0; j < d; ++j) x[j] = values[j][idx[j]];
    bool inside = true;
    for (std::size_t i = 0; i < r && inside; ++i)
      inside = detail::blocks_raw(x.data(), flat.data() + i * d, d);
    if (inside) best = std::min(best, coordinate_sum(x));
    std::size_t j = 0;
    while (j < d && ++idx[j] == values[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  return best;
}

/// Maintains F-_n along a trajectory. F- is nondecreasing, so while the last
/// optimal corner stays in the record-setting region it remains optimal; when
/// a new record evicts it the search restarts with the old value as a floor.
class FrontierTracker {
 public:
  const MinCorner& update(const RecordBook& book) {
    if (book.record_count() == 0) {
      corner_ = {0.0, std::vector<double>(book.dim(), 0.0)};
      valid_ = true;
      return corner_;
    }
    if (valid_ && corner_.witness.size() == book.dim()) {
      bool still_inside = true;
      for (std::size_t i = 0; i < book.record_count() && still_inside; ++i)
        still_inside = detail::covered(corner_.witness, book.record(i).data());
      if (still_inside) return corner_;
    }
    if (book.dim() == 2) {
      corner_ = f_minus_staircase(book.view());
    } else {
      const double floor = valid_ ? corner_.value : -std::numeric_limits<double>::infinity();
      corner_ = f_minus_branch_and_bound(book.view(), floor);
    }
    valid_ = true;
    return corner_;
  }

  void reset() noexcept { valid_ = false; }

 private:
  MinCorner corner_;
  bool valid_ = false;
};

inline FrontierSummary summarize(const RecordBook& book, double f_minus_value) {
  FrontierSummary s;
  s.f_minus = f_minus_value;
  s.f_plus = f_plus(book);
  s.width = s.f_plus - s.f_minus;
  s.dim_max.assign(book.dim_max().begin(), book.dim_max().end());
  s.bhat.assign(book.top_capacity(), std::numeric_limits<double>::quiet_NaN());
  const auto top = book.top_sums();
  std::copy(top.begin(), top.end(), s.bhat.begin());
  return s;
}

inline FrontierSummary summarize(const RecordBook& book) { return summarize(book, f_minus(book)); }

}  // namespace pareto
