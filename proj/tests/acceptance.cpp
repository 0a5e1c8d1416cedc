// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pareto/pareto_records.hpp"

using namespace pareto;
using harness::CheckpointRow;
using harness::Clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= limit_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-44s %s; %.1f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s,
              limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::vector<Point> random_points(RandomStream& s, std::size_t n, std::size_t d, bool lattice) {
  std::vector<Point> pts;
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x) v = lattice ? std::floor(3.0 * s.next_uniform()) : s.next_exponential();
    pts.emplace_back(x);
  }
  return pts;
}

double median_of(std::vector<double> v) { return stats::median(v); }

std::vector<double> column_at(const std::vector<std::vector<CheckpointRow>>& trials, std::size_t first_trials,
                              std::uint64_t n, double CheckpointRow::*field) {
  std::vector<double> out;
  for (std::size_t t = 0; t < std::min(first_trials, trials.size()); ++t)
    for (const auto& r : trials[t])
      if (r.clock == Clock::obs && r.n == n) out.push_back(r.*field);
  return out;
}

std::vector<double> records_at(const std::vector<std::vector<CheckpointRow>>& trials, std::uint64_t n) {
  std::vector<double> out;
  for (const auto& rows : trials)
    for (const auto& r : rows)
      if (r.clock == Clock::obs && r.n == n) out.push_back(static_cast<double>(r.m));
  return out;
}

}  // namespace

int main() {
  std::printf("Acceptance suite (%zu worker threads)\n", harness::default_thread_count());

  report(1, "record book equals all-pairs oracle", 10, [] {
    RandomStream s(1001, 0);
    for (int i = 0; i < 1000; ++i) {
      const std::size_t d = 1 + i % 5;
      const std::size_t n = 1 + static_cast<std::size_t>(s.next_uniform() * 200);
      const auto pts = random_points(s, n, d, i % 4 == 0);
      RecordBook b(d);
      for (const auto& p : pts) b.observe(p);
      if (!(b == rebuild_oracle(pts))) return Outcome{false, fmt("sequence %d differs", i)};
    }
    return Outcome{true, "1000/1000 sequences identical"};
  });

  report(2, "F- equals brute force and candidate grid", 30, [] {
    RandomStream s(1002, 0);
    std::size_t max_r = 0;
    for (int i = 0; i < 500; ++i) {
      const std::size_t d = 1 + i % 4;
      std::vector<Point> recs;
      if (i % 2 == 0) {
        RecordBook b(d);
        for (int k = 0; k < 40; ++k) b.observe(sample_observation(s, d));
        recs = b.records();
      } else {
        // Points on a common coordinate-sum level are mutually non-dominating.
        const std::size_t r = 1 + static_cast<std::size_t>(s.next_uniform() * 12);
        for (std::size_t k = 0; k < r; ++k) {
          std::vector<double> x(d);
          double t = 0.0, acc = 0.0;
          for (double& v : x) t += (v = s.next_exponential());
          for (std::size_t j = 0; j + 1 < d; ++j) acc += (x[j] = 4.0 * x[j] / t);
          x[d - 1] = std::max(0.0, 4.0 - acc);
          recs.emplace_back(x);
        }
      }
      if (recs.size() > kBruteForceMaxRecords) recs.resize(kBruteForceMaxRecords);
      max_r = std::max(max_r, recs.size());
      RecordBook b(d);
      for (const auto& p : recs) b.observe(p);
      if (b.remaining() != recs.size()) return Outcome{false, fmt("instance %d is not an antichain", i)};
      const double v = f_minus(b);
      if (v != f_minus_bruteforce(recs) || v != f_minus_candidate_grid(recs))
        return Outcome{false, fmt("instance %d disagrees", i)};
    }
    return Outcome{true, fmt("500/500 instances exact, r up to %zu", max_r)};
  });

  report(3, "exact identities", 5, [] {
    using namespace analytics;
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 1000; ++n) worst = std::max(worst, std::abs(p_record(n, 1) - 1.0 / static_cast<double>(n)));
    if (worst > 1e-12) return Outcome{false, fmt("max |p(n,1) - 1/n| = %.3g", worst)};
    for (std::size_t d = 1; d <= 8; ++d)
      if (std::abs(p_record(2, d) - (1.0 - std::ldexp(1.0, -static_cast<int>(d)))) > 1e-15)
        return Outcome{false, fmt("p(2,%zu) wrong", d)};
    double worst_r = 0.0;
    for (std::uint64_t n = 1; n <= 1000; ++n) worst_r = std::max(worst_r, std::abs(mean_remaining(n, 1) - 1.0));
    if (worst_r > 1e-12) return Outcome{false, fmt("max |E r_n - 1| = %.3g in d = 1", worst_r)};
    for (std::size_t d = 1; d <= 4; ++d)
      for (std::uint64_t n = 2; n <= 1000; ++n)
        if (mean_records(n, d) != mean_records(n - 1, d) + p_record(n, d))
          return Outcome{false, fmt("telescoping fails at n=%llu d=%zu", static_cast<unsigned long long>(n), d)};
    return Outcome{true, fmt("max |p(n,1)-1/n| = %.2g, max |E r_n - 1| = %.2g, telescoping exact", worst, worst_r)};
  });

  report(4, "Y_n - ln n vs Gumbel (n=1e5, d=2, 1e4 draws)", 60, [] {
    const std::uint64_t n = 100000;
    const analytics::YSampler sampler(n, 2);
    RandomStream s(1004, 0);
    std::vector<double> y(10000);
    const double ln_n = std::log(static_cast<double>(n));
    for (double& v : y) v = sampler.sample(s) - ln_n;
    const double ks = stats::ks_statistic(y, stats::Reference::gumbel());
    return Outcome{ks < 0.03, fmt("KS = %.4f (threshold 0.03)", ks)};
  });

  // Shared d = 2 ensemble for criteria 5 to 9.
  harness::ExperimentConfig c2;
  c2.d = 2;
  c2.n_max = 1000000;
  c2.trials = 2000;
  c2.master_seed = 20002;
  c2.checkpoints = std::vector<std::uint64_t>{1000, 10000, 100000, 1000000};
  c2.strip_check = true;
  harness::EnsembleResult e2;
  {
    const auto t0 = std::chrono::steady_clock::now();
    e2 = harness::run_ensemble(c2);
    std::printf("       d = 2 ensemble: %zu trials to n = %llu in %.1f s\n", c2.trials,
                static_cast<unsigned long long>(c2.n_max),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  report(5, "F+ - centering vs Gumbel (n=1e5, d=2, 2000)", 600, [&] {
    const auto v = column_at(e2.trials, 2000, 100000, &CheckpointRow::norm_fplus);
    const double ks = stats::ks_statistic(v, stats::Reference::gumbel());
    return Outcome{ks < 0.05, fmt("KS = %.4f over %zu trials (threshold 0.05)", ks, v.size())};
  });

  report(6, "mean R_n vs exact (n=1e4, d=2, 2000)", 60, [&] {
    const auto v = records_at(e2.trials, 10000);
    const double mean = stats::mean(v), sd = stats::stddev(v);
    const double exact = analytics::mean_records(10000, 2);
    const double bound = 3 * sd / std::sqrt(static_cast<double>(v.size()));
    return Outcome{std::abs(mean - exact) < bound,
                   fmt("mean %.4f, exact %.4f, |diff| %.4f < %.4f", mean, exact, std::abs(mean - exact), bound)};
  });

  report(7, "standardized R_n vs normal (n=1e6, d=2)", 120, [&] {
    const double n = 1e6;
    const double exact = analytics::mean_records(1000000, 2);
    const double sd = std::sqrt(*analytics::AnalyticContext(2).records_variance_constant()) * std::log(n);
    auto v = records_at(e2.trials, 1000000);
    for (double& x : v) x = (x - exact) / sd;
    const double ks = stats::ks_statistic(v, stats::Reference::normal());
    return Outcome{ks < 0.10, fmt("KS = %.4f (threshold 0.10), E R_n = %.4f", ks, exact)};
  });

  report(8, "median W_n / ln ln n trend (d=2, 500)", 10, [&] {
    const double m3 = median_of(column_at(e2.trials, 500, 1000, &CheckpointRow::norm_width));
    const double m6 = median_of(column_at(e2.trials, 500, 1000000, &CheckpointRow::norm_width));
    const bool ok = std::abs(m6 - 1) < std::abs(m3 - 1) && m6 >= 0.5 && m6 <= 1.8;
    return Outcome{ok, fmt("median at 1e3 = %.4f, at 1e6 = %.4f", m3, m6)};
  });

  report(9, "strip coverage (n=1e6, d=2, 100)", 10, [&] {
    const auto v = column_at(e2.trials, 100, 1000000, &CheckpointRow::strip);
    const double mean = stats::mean(v);
    return Outcome{mean >= 0.95 && v.size() == 100, fmt("mean fraction %.4f over %zu trials", mean, v.size())};
  });
  e2 = {};

  // Shared d = 3 records-time ensemble for criteria 10 and 11.
  harness::ExperimentConfig c3;
  c3.d = 3;
  c3.n_max = 10000000;
  c3.trials = 50;
  c3.master_seed = 30003;
  c3.checkpoints = std::vector<std::uint64_t>{c3.n_max};
  c3.records_time = true;
  harness::EnsembleResult e3;
  {
    const auto t0 = std::chrono::steady_clock::now();
    e3 = harness::run_ensemble(c3);
    std::printf("       d = 3 ensemble: %zu trials to n = %llu in %.1f s\n", c3.trials,
                static_cast<unsigned long long>(c3.n_max),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::uint64_t m_star = std::numeric_limits<std::uint64_t>::max();
  for (const auto& rows : e3.trials)
    for (const auto& r : rows)
      if (r.clock == Clock::obs && r.n == c3.n_max) m_star = std::min(m_star, r.m);
  auto rec_rows_at = [&](std::uint64_t m) {
    std::vector<const CheckpointRow*> out;
    for (const auto& rows : e3.trials)
      for (const auto& r : rows)
        if (r.clock == Clock::rec && r.m == m) out.push_back(&r);
    return out;
  };

  report(10, "ln T_m centering and switching (d=3, 50)", 10, [&] {
    for (const auto& rows : e3.trials)
      if (!harness::check_switching_relation(rows)) return Outcome{false, "switching relation violated"};
    if (m_star < 300) return Outcome{false, fmt("largest common m = %llu < 300", static_cast<unsigned long long>(m_star))};
    const auto rows = rec_rows_at(m_star);
    double s = 0.0;
    for (const auto* r : rows) s += std::log(static_cast<double>(r->n));
    const double mean_ln_t = s / static_cast<double>(rows.size());
    const double scale = std::cbrt(6.0 * static_cast<double>(m_star));
    const double rel = std::abs(mean_ln_t - analytics::tm_centering(static_cast<double>(m_star), 3)) / scale;
    return Outcome{rel < 0.05 && rows.size() == c3.trials,
                   fmt("m = %llu, mean ln T_m = %.4f, centering %.4f, relative gap %.4f",
                       static_cast<unsigned long long>(m_star), mean_ln_t,
                       analytics::tm_centering(static_cast<double>(m_star), 3), rel)};
  });

  report(11, "median W_Tm / ln m trend (d=3, 50)", 10, [&] {
    auto med = [&](std::uint64_t m) {
      std::vector<double> v;
      for (const auto* r : rec_rows_at(m)) v.push_back(r->norm_width);
      return median_of(v);
    };
    const double target = 1.0 - 1.0 / 3.0;
    const double m20 = med(20), mx = med(m_star);
    const bool ok = mx >= 0.3 && mx <= 1.0 && std::abs(mx - target) < std::abs(m20 - target);
    return Outcome{ok, fmt("median at m=20: %.4f, at m=%llu: %.4f", m20, static_cast<unsigned long long>(m_star), mx)};
  });
  e3 = {};

  report(12, "property suites", 120, [] {
    std::string failed;
    std::size_t checks = 0;
    // Frontier inequalities and monotone sample paths.
    RandomStream s(1012, 0);
    for (std::size_t d = 1; d <= 5 && failed.empty(); ++d) {
      for (int t = 0; t < 4 && failed.empty(); ++t) {
        RecordBook b(d, 16);
        FrontierTracker tr;
        double pm = 0.0, pp = 0.0;
        std::vector<double> ptop;
        for (int n = 1; n <= 20000 && failed.empty(); ++n) {
          b.observe(sample_observation(s, d));
          const auto fsum = summarize(b, tr.update(b).value);
          const double dmin = *std::min_element(fsum.dim_max.begin(), fsum.dim_max.end());
          ++checks;
          if (fsum.width != fsum.f_plus - fsum.f_minus || fsum.width < 0) failed = "width";
          if (fsum.f_minus > dmin) failed = "F- <= min_j B+(j)";
          if (fsum.f_minus < pm || fsum.f_plus < pp) failed = "monotone F-/F+";
          for (std::size_t k = 0; k < fsum.bhat.size() && !std::isnan(fsum.bhat[k]); ++k) {
            if (k > 0 && fsum.bhat[k] > fsum.bhat[k - 1]) failed = "bhat nonincreasing in m";
            if (b.remaining() >= k + 1 && fsum.f_minus > fsum.bhat[k]) failed = "F- <= bhat";
            if (k < ptop.size() && !std::isnan(ptop[k]) && fsum.bhat[k] < ptop[k]) failed = "monotone bhat";
          }
          if (d == 1 && (fsum.width != 0 || fsum.f_minus != fsum.dim_max[0])) failed = "d = 1 width";
          pm = fsum.f_minus;
          pp = fsum.f_plus;
          ptop = fsum.bhat;
        }
      }
    }
    // Sweetening on 1e5 random valid inputs.
    std::size_t sweetened = 0;
    for (int i = 0; i < 100000 && failed.empty(); ++i) {
      const std::size_t d = 1 + i % 6;
      const auto dm1 = static_cast<std::int64_t>(d) - 1;
      const std::int64_t m = std::max<std::int64_t>(1, dm1) + static_cast<std::int64_t>(s.next_uniform() * 12);
      const double target = static_cast<double>(2 * m - 2 * dm1);
      std::vector<double> x(d);
      double t = 0.0, acc = 0.0;
      for (double& v : x) t += (v = s.next_exponential());
      for (std::size_t j = 0; j + 1 < d; ++j) acc += (x[j] = x[j] / t * target);
      x[d - 1] = std::max(0.0, target - acc);
      const Point p(x);
      if (std::abs(p.sum() - target) > kSweetenTolerance) continue;
      const auto g = sweeten(p, m);
      bool ok = g.sum() == 2 * m - dm1;
      for (std::size_t j = 0; j < d; ++j) ok = ok && g.coords[j] >= 0 && static_cast<double>(g.coords[j]) >= x[j] - kSweetenTolerance;
      if (!ok) failed = "sweeten postconditions";
      ++sweetened;
    }
    if (sweetened < 99000) failed = "too few sweetening inputs";
    // y_density normalization.
    double worst = 0.0;
    for (std::size_t d = 1; d <= 3; ++d) {
      for (std::uint64_t n : {1u, 10u, 1000u, 100000u}) {
        const double ln_n = std::log(static_cast<double>(n));
        const double breaks[] = {0.0, std::max(0.5, ln_n - 5), ln_n + 5, ln_n + 20, ln_n + 70};
        const auto r = quad::integrate([&](double y) { return analytics::y_density(n, d, y); },
                                       std::span<const double>(breaks), 1e-13);
        worst = std::max(worst, std::abs(r.value - 1.0));
      }
    }
    if (worst > 1e-8) failed = "y_density normalization";
    if (!failed.empty()) return Outcome{false, "failed: " + failed};
    return Outcome{true, fmt("%zu path states, %zu sweetenings, max |int f_n - 1| = %.2g", checks, sweetened, worst)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
