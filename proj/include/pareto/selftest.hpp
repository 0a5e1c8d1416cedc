#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pareto/analytics.hpp"
#include "pareto/frontier.hpp"
#include "pareto/geometry.hpp"
#include "pareto/point.hpp"
#include "pareto/quadrature.hpp"
#include "pareto/random.hpp"
#include "pareto/record_book.hpp"

namespace pareto::selftest {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::string failure;  ///< first failing property
  double seconds = 0.0;
};

/// Records the first failing check of a suite.
class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}
  bool operator()(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok && r_.passed) {
      r_.passed = false;
      r_.failure = what;
    }
    return ok;
  }
  bool failed() const noexcept { return !r_.passed; }

 private:
  SuiteResult& r_;
};

namespace detail {

inline std::vector<Point> random_points(RandomStream& s, std::size_t n, std::size_t d, bool lattice) {
  std::vector<Point> pts;
  pts.reserve(n);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x) v = lattice ? std::floor(4.0 * s.next_uniform()) : s.next_exponential();
    pts.emplace_back(x);
  }
  return pts;
}

inline RecordBook book_of(std::span<const Point> pts, std::size_t d) {
  RecordBook b(d);
  for (const auto& p : pts) b.observe(p);
  return b;
}

// At most `cap` current records of a random book, as a mutually
// non-dominating set.
inline std::vector<Point> random_antichain(RandomStream& s, std::size_t d, std::size_t n, std::size_t cap,
                                           bool lattice) {
  const auto pts = random_points(s, n, d, lattice);
  auto recs = book_of(pts, d).records();
  if (recs.size() > cap) recs.resize(cap);
  return recs;
}

}  // namespace detail

inline void dominance_suite(Checker& check) {
  check(strictly_dominates(Point{2, 3}, Point{1, 2}), "(1,2) < (2,3)");
  check(!strictly_dominates(Point{2, 1}, Point{1, 2}), "(1,2) not < (2,1)");
  check(!strictly_dominates(Point{1, 2}, Point{1, 1}), "equal coordinate blocks domination");
  check(!strictly_dominates(Point{1, 1}, Point{1, 1}), "a point does not dominate itself");
  RandomStream s(7, 0);
  for (int i = 0; i < 2000 && !check.failed(); ++i) {
    const std::size_t d = 1 + i % 5;
    const auto a = detail::random_points(s, 1, d, i % 2 == 0)[0];
    const auto b = detail::random_points(s, 1, d, i % 2 == 0)[0];
    bool all = true;
    for (std::size_t j = 0; j < d; ++j) all = all && b[j] < a[j];
    check(strictly_dominates(a, b) == all, "random pair disagrees with coordinatewise test");
    check(!(strictly_dominates(a, b) && strictly_dominates(b, a)), "domination is asymmetric");
  }
}

inline void record_oracle_suite(Checker& check) {
  RandomStream s(11, 0);
  for (int i = 0; i < 200 && !check.failed(); ++i) {
    const std::size_t d = 1 + i % 5;
    const std::size_t n = 1 + static_cast<std::size_t>(s.next_uniform() * 200);
    const auto pts = detail::random_points(s, n, d, i % 3 == 0);
    const RecordBook inc = detail::book_of(pts, d);
    check(inc == rebuild_oracle(pts), "incremental book differs from all-pairs oracle");
    check(inc.total_records() == inc.remaining() + inc.broken(), "R != r + beta");
    if (d == 1 && i % 3 != 0) check(inc.remaining() == 1, "d = 1 with more than one current record");
  }
}

inline void f_minus_oracle_suite(Checker& check) {
  RandomStream s(13, 0);
  for (int i = 0; i < 150 && !check.failed(); ++i) {
    const std::size_t d = 1 + i % 4;
    const auto recs = detail::random_antichain(s, d, 4 + i % 40, 10, i % 4 == 0);
    const RecordBook book = detail::book_of(recs, d);
    const double main = f_minus(book);
    check(main == f_minus_bruteforce(recs), "f_minus differs from assignment enumeration");
    check(main == f_minus_candidate_grid(recs), "f_minus differs from candidate grid");
  }
}

inline void staircase_vs_bnb_suite(Checker& check) {
  RandomStream s(17, 0);
  for (int i = 0; i < 300 && !check.failed(); ++i) {
    const auto pts = detail::random_points(s, 1 + i * 7 % 500, 2, i % 5 == 0);
    const RecordBook book = detail::book_of(pts, 2);
    check(f_minus_staircase(book.view()).value == f_minus_branch_and_bound(book.view()).value,
          "staircase sweep and branch-and-bound disagree");
  }
}

inline void frontier_bounds_suite(Checker& check) {
  RandomStream s(19, 0);
  for (int t = 0; t < 20 && !check.failed(); ++t) {
    const std::size_t d = 1 + t % 4;
    RecordBook book(d, 8);
    FrontierTracker tracker;
    double prev_minus = 0.0, prev_plus = 0.0;
    std::vector<double> prev_top;
    for (int n = 1; n <= 3000 && !check.failed(); ++n) {
      book.observe(sample_observation(s, d));
      const auto& corner = tracker.update(book);
      const double fm = corner.value;
      const double fp = f_plus(book);
      check(fm == f_minus(book), "tracked F- differs from a fresh computation");
      check(fm >= prev_minus && fp >= prev_plus, "F- or F+ decreased");
      check(fm <= fp, "negative width");
      const auto dm = book.dim_max();
      check(fm <= *std::min_element(dm.begin(), dm.end()), "F- exceeds min_j B+(j)");
      const auto top = book.top_sums();
      for (std::size_t k = 0; k < top.size(); ++k) {
        if (k > 0) check(top[k] <= top[k - 1], "bhat not nonincreasing in m");
        if (book.remaining() >= k + 1) check(fm <= top[k], "F- exceeds bhat");
        if (k < prev_top.size()) check(top[k] >= prev_top[k], "bhat decreased along the path");
      }
      check(in_rs(book, corner.witness), "F- witness outside the record-setting region");
      if (d == 1) check(fm == fp, "d = 1 width is not zero");
      prev_minus = fm;
      prev_plus = fp;
      prev_top.assign(top.begin(), top.end());
    }
  }
}

inline void sweeten_suite(Checker& check) {
  check(sweeten(Point{1.3, 2.7}, 3) == IntegerGridPoint{{2, 3}}, "sweeten (1.3, 2.7), m = 3");
  check(sweeten(Point{2.0, 2.0}, 3) == IntegerGridPoint{{3, 2}}, "sweeten (2, 2), m = 3");
  RandomStream s(23, 0);
  for (int i = 0; i < 10000 && !check.failed(); ++i) {
    const std::size_t d = 1 + i % 6;
    const std::int64_t m = std::max<std::int64_t>(1, static_cast<std::int64_t>(d) - 1) +
                           static_cast<std::int64_t>(s.next_uniform() * 10);
    const double target = static_cast<double>(2 * m - 2 * (static_cast<std::int64_t>(d) - 1));
    std::vector<double> w(d);
    double total = 0.0;
    for (double& v : w) total += (v = s.next_exponential());
    std::vector<double> x(d, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < d; ++j) acc += (x[j] = w[j] / total * target);
    x[d - 1] = std::max(0.0, target - acc);
    const Point p(x);
    if (std::abs(p.sum() - target) > kSweetenTolerance) continue;
    const auto g = sweeten(p, m);
    bool above = true;
    for (std::size_t j = 0; j < d; ++j) above = above && static_cast<double>(g.coords[j]) >= x[j] - kSweetenTolerance;
    check(above, "sweetened point is not above x");
    check(g.sum() == 2 * m - static_cast<std::int64_t>(d - 1), "sweetened point has the wrong sum");
  }
}

inline void exact_identities_suite(Checker& check) {
  using namespace analytics;
  for (std::uint64_t n = 1; n <= 300 && !check.failed(); ++n)
    check(std::abs(p_record(n, 1) - 1.0 / static_cast<double>(n)) <= 1e-12, "p(n, 1) != 1/n");
  for (std::size_t d = 1; d <= 8; ++d)
    check(std::abs(p_record(2, d) - (1.0 - std::ldexp(1.0, -static_cast<int>(d)))) <= 1e-15,
          "p(2, d) != 1 - 2^-d");
  for (std::uint64_t n = 1; n <= 300; ++n)
    check(std::abs(mean_remaining(n, 1) - 1.0) <= 1e-12, "E r_n != 1 in d = 1");
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::uint64_t n = 2; n <= 200; ++n)
      check(mean_records(n, d) == mean_records(n - 1, d) + p_record(n, d), "telescoping identity");
  }
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::uint64_t n : {1u, 10u, 1000u}) {
      const double top = std::log(static_cast<double>(n)) + 60.0;
      const auto r = quad::integrate([&](double y) { return y_density(n, d, y); }, 0.0, top, 1e-12);
      check(std::abs(r.value - 1.0) <= 1e-8, "y_density does not integrate to 1");
    }
  }
  for (std::size_t d = 1; d <= 5; ++d) {
    for (std::uint64_t n = 2; n <= 200; ++n)
      check(p_record(n, d) < p_record(n - 1, d), "p_record not decreasing in n");
  }
}

struct Suite {
  const char* name;
  void (*run)(Checker&);
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"dominance", dominance_suite},
      {"record-oracle", record_oracle_suite},
      {"f-minus-oracle", f_minus_oracle_suite},
      {"staircase-vs-bnb", staircase_vs_bnb_suite},
      {"frontier-bounds", frontier_bounds_suite},
      {"sweeten", sweeten_suite},
      {"exact-identities", exact_identities_suite},
  };
  return all;
}

/// Runs every suite. An exception inside a suite counts as its failure.
inline std::vector<SuiteResult> run_all() {
  std::vector<SuiteResult> out;
  for (const auto& suite : suites()) {
    SuiteResult r;
    r.name = suite.name;
    Checker check(r);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      suite.run(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pareto::selftest
