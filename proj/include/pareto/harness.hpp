#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pareto/analytics.hpp"
#include "pareto/frontier.hpp"
#include "pareto/random.hpp"
#include "pareto/record_book.hpp"
#include "pareto/statistics.hpp"

namespace pareto::harness {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::size_t d = 2;
  std::uint64_t n_max = 10000;
  /// Ratio of the geometric checkpoint grid 10, 12, 14, ... (ignored when
  /// an explicit list is given).
  double checkpoint_ratio = 1.2;
  std::optional<std::vector<std::uint64_t>> checkpoints;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  /// Capacity M of the top coordinate-sum tracker.
  std::size_t top_m = RecordBook::kDefaultTopCapacity;
  /// Number K of bhat_k columns emitted per row (K <= top_m).
  std::size_t bhat_columns = 4;
  /// Also emit a row at every record epoch T_m.
  bool records_time = false;
  /// Also compute the strip-coverage fraction at observation checkpoints.
  bool strip_check = false;

  void validate() const {
    if (d < 1) throw ConfigError("d must be >= 1");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(checkpoint_ratio > 1.0)) throw ConfigError("checkpoint ratio must be > 1");
    if (top_m < 1) throw ConfigError("top_m must be >= 1");
    if (bhat_columns > top_m) throw ConfigError("bhat_columns must not exceed top_m");
    if (checkpoints) {
      if (checkpoints->empty()) throw ConfigError("checkpoint list is empty");
      for (std::uint64_t c : *checkpoints) {
        if (c < 1 || c > n_max) throw ConfigError("checkpoint outside [1, n_max]");
      }
    }
  }

  /// Sorted, de-duplicated observation checkpoints. The geometric grid starts
  /// at 10 and always ends at n_max.
  std::vector<std::uint64_t> checkpoint_grid() const {
    validate();
    std::vector<std::uint64_t> grid;
    if (checkpoints) {
      grid = *checkpoints;
    } else {
      for (double x = 10.0; x <= static_cast<double>(n_max); x *= checkpoint_ratio) {
        const auto v = static_cast<std::uint64_t>(std::llround(x));
        if (v <= n_max) grid.push_back(v);
      }
      grid.push_back(n_max);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
  }
};

enum class Clock { obs, rec };

inline const char* clock_name(Clock c) noexcept { return c == Clock::obs ? "obs" : "rec"; }

/// Trajectory state at one checkpoint (clock = obs) or record epoch (clock = rec).
struct CheckpointRow {
  std::size_t trial = 0;
  Clock clock = Clock::obs;
  std::uint64_t n = 0;     ///< observations so far
  std::uint64_t m = 0;     ///< records so far, R_n
  std::uint64_t r = 0;     ///< current records
  std::uint64_t beta = 0;  ///< broken records
  double f_minus = 0.0;
  double f_plus = 0.0;
  double width = 0.0;
  double dim_max_min = 0.0;
  std::vector<double> bhat;
  double norm_fplus = std::numeric_limits<double>::quiet_NaN();
  double norm_width = std::numeric_limits<double>::quiet_NaN();
  double norm_r = std::numeric_limits<double>::quiet_NaN();
  double strip = std::numeric_limits<double>::quiet_NaN();

  friend bool operator==(const CheckpointRow& a, const CheckpointRow& b);
};

namespace detail {
inline bool same_double(double a, double b) noexcept {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}
}  // namespace detail

inline bool operator==(const CheckpointRow& a, const CheckpointRow& b) {
  if (a.bhat.size() != b.bhat.size()) return false;
  for (std::size_t k = 0; k < a.bhat.size(); ++k)
    if (!detail::same_double(a.bhat[k], b.bhat[k])) return false;
  return a.trial == b.trial && a.clock == b.clock && a.n == b.n && a.m == b.m && a.r == b.r &&
         a.beta == b.beta && detail::same_double(a.f_minus, b.f_minus) &&
         detail::same_double(a.f_plus, b.f_plus) && detail::same_double(a.width, b.width) &&
         detail::same_double(a.dim_max_min, b.dim_max_min) &&
         detail::same_double(a.norm_fplus, b.norm_fplus) &&
         detail::same_double(a.norm_width, b.norm_width) &&
         detail::same_double(a.norm_r, b.norm_r) && detail::same_double(a.strip, b.strip);
}

/// Fraction of current records whose coordinate sum lies in the strip
///   [ln n - ln ln ln n - ln(4(d-1)),  ln n + 4(d-1) ln ln n].
inline double strip_coverage(const RecordBook& book) {
  if (book.dim() < 2) throw std::domain_error("strip_coverage: requires d >= 2");
  if (book.n() < 16) throw std::domain_error("strip_coverage: requires n >= 16");
  const double l1 = std::log(static_cast<double>(book.n()));
  const double l2 = std::log(l1);
  const double l3 = std::log(l2);
  const double dm1 = static_cast<double>(book.dim() - 1);
  const double lo = l1 - l3 - std::log(4.0 * dm1);
  const double hi = l1 + 4.0 * dm1 * l2;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < book.record_count(); ++i) {
    const double s = coordinate_sum(book.record(i));
    if (s >= lo && s <= hi) ++inside;
  }
  return book.record_count() == 0
             ? 0.0
             : static_cast<double>(inside) / static_cast<double>(book.record_count());
}

inline CheckpointRow make_row(const ExperimentConfig& cfg, std::size_t trial, Clock clock,
                              const RecordBook& book, FrontierTracker& tracker) {
  CheckpointRow row;
  row.trial = trial;
  row.clock = clock;
  row.n = book.n();
  row.m = book.total_records();
  row.r = book.remaining();
  row.beta = book.broken();
  row.f_minus = tracker.update(book).value;
  row.f_plus = f_plus(book);
  row.width = row.f_plus - row.f_minus;
  const auto dm = book.dim_max();
  row.dim_max_min = *std::min_element(dm.begin(), dm.end());
  row.bhat.assign(cfg.bhat_columns, std::numeric_limits<double>::quiet_NaN());
  const auto top = book.top_sums();
  for (std::size_t k = 0; k < cfg.bhat_columns && k < top.size(); ++k) row.bhat[k] = top[k];

  const double n = static_cast<double>(row.n);
  const double dd = static_cast<double>(cfg.d);
  if (row.n >= 3) {
    const double l1 = std::log(n);
    const double l2 = std::log(l1);
    row.norm_r = static_cast<double>(row.r) * dd * l2 / l1;
    if (clock == Clock::obs) {
      row.norm_fplus = row.f_plus - analytics::fplus_centering(n, cfg.d);
      row.norm_width = row.width / l2;
    }
  }
  if (clock == Clock::rec && row.m >= 2) {
    const double mm = static_cast<double>(row.m);
    row.norm_width = row.width / std::log(mm);
    if (cfg.d >= 3) row.norm_fplus = row.f_plus - analytics::records_time_fplus_centering(mm, cfg.d);
  }
  if (cfg.strip_check && clock == Clock::obs && cfg.d >= 2 && row.n >= 16)
    row.strip = strip_coverage(book);
  return row;
}

struct TrialOutput {
  std::vector<CheckpointRow> rows;
  RecordBook book;
};

/// Feed n_max observations of trial `trial` through a RecordBook, emitting a
/// row at every checkpoint and, with records_time, at every record epoch.
/// Deterministic in (master_seed, trial).
inline TrialOutput run_trial_full(const ExperimentConfig& cfg, std::size_t trial) {
  const auto grid = cfg.checkpoint_grid();
  TrialOutput out{{}, RecordBook(cfg.d, cfg.top_m)};
  RecordBook& book = out.book;
  RandomStream stream(cfg.master_seed, trial);
  FrontierTracker tracker;
  std::vector<double> x(cfg.d);
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= cfg.n_max; ++n) {
    sample_observation_into(stream, x);
    const ObserveOutcome o = book.observe(x);
    if (cfg.records_time && o.is_record)
      out.rows.push_back(make_row(cfg, trial, Clock::rec, book, tracker));
    if (next < grid.size() && grid[next] == n) {
      out.rows.push_back(make_row(cfg, trial, Clock::obs, book, tracker));
      ++next;
    }
  }
  return out;
}

inline std::vector<CheckpointRow> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  return run_trial_full(cfg, trial).rows;
}

struct AggregateRow {
  Clock clock = Clock::obs;
  std::uint64_t index = 0;  ///< n for obs, m for rec
  std::string statistic;
  stats::Summary summary;
};

struct KsRow {
  Clock clock = Clock::obs;
  std::uint64_t index = 0;
  std::string statistic;
  std::string reference;
  std::size_t count = 0;
  double ks = 0.0;
  double critical95 = 0.0;
};

struct EnsembleResult {
  ExperimentConfig config;
  std::vector<std::vector<CheckpointRow>> trials;  ///< rows per trial, in trial order
  std::vector<AggregateRow> aggregate;
  std::vector<KsRow> ks;
};

/// THREADS environment variable, else the number of logical cores.
inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

using Getter = double (*)(const CheckpointRow&);

struct Column {
  const char* name;
  Getter get;
};

inline const std::vector<Column>& obs_columns() {
  static const std::vector<Column> cols = {
      {"m", [](const CheckpointRow& r) { return static_cast<double>(r.m); }},
      {"r", [](const CheckpointRow& r) { return static_cast<double>(r.r); }},
      {"beta", [](const CheckpointRow& r) { return static_cast<double>(r.beta); }},
      {"f_minus", [](const CheckpointRow& r) { return r.f_minus; }},
      {"f_plus", [](const CheckpointRow& r) { return r.f_plus; }},
      {"width", [](const CheckpointRow& r) { return r.width; }},
      {"dim_max_min", [](const CheckpointRow& r) { return r.dim_max_min; }},
      {"norm_fplus", [](const CheckpointRow& r) { return r.norm_fplus; }},
      {"norm_width", [](const CheckpointRow& r) { return r.norm_width; }},
      {"norm_r", [](const CheckpointRow& r) { return r.norm_r; }},
      {"strip", [](const CheckpointRow& r) { return r.strip; }},
  };
  return cols;
}

inline const std::vector<Column>& rec_columns() {
  static const std::vector<Column> cols = {
      {"ln_n", [](const CheckpointRow& r) { return std::log(static_cast<double>(r.n)); }},
      {"r", [](const CheckpointRow& r) { return static_cast<double>(r.r); }},
      {"beta", [](const CheckpointRow& r) { return static_cast<double>(r.beta); }},
      {"f_minus", [](const CheckpointRow& r) { return r.f_minus; }},
      {"f_plus", [](const CheckpointRow& r) { return r.f_plus; }},
      {"width", [](const CheckpointRow& r) { return r.width; }},
      {"norm_fplus", [](const CheckpointRow& r) { return r.norm_fplus; }},
      {"norm_width", [](const CheckpointRow& r) { return r.norm_width; }},
  };
  return cols;
}

}  // namespace detail

/// Per-checkpoint summaries and KS comparisons, reduced over trials in
/// trial-index order.
inline void aggregate(EnsembleResult& result) {
  const ExperimentConfig& cfg = result.config;
  result.aggregate.clear();
  result.ks.clear();

  std::map<std::uint64_t, std::vector<const CheckpointRow*>> by_n;
  std::map<std::uint64_t, std::vector<const CheckpointRow*>> by_m;
  for (const auto& rows : result.trials) {
    for (const auto& row : rows) (row.clock == Clock::obs ? by_n[row.n] : by_m[row.m]).push_back(&row);
  }

  auto summarize_group = [&](Clock clock, std::uint64_t index, const std::vector<const CheckpointRow*>& g,
                             const std::vector<detail::Column>& cols) {
    std::vector<double> v(g.size());
    for (const auto& c : cols) {
      if (std::string(c.name) == "strip" && !cfg.strip_check) continue;
      for (std::size_t i = 0; i < g.size(); ++i) v[i] = c.get(*g[i]);
      result.aggregate.push_back({clock, index, c.name, stats::summarize(v)});
    }
  };
  for (const auto& [n, g] : by_n) summarize_group(Clock::obs, n, g, detail::obs_columns());
  for (const auto& [m, g] : by_m) summarize_group(Clock::rec, m, g, detail::rec_columns());

  const analytics::AnalyticContext ctx(cfg.d);
  const auto gumbel = stats::Reference::gumbel();
  const auto normal = stats::Reference::normal();
  for (const auto& [n, g] : by_n) {
    if (n < 3) continue;
    std::vector<double> v;
    for (const auto* row : g) v.push_back(row->norm_fplus);
    result.ks.push_back({Clock::obs, n, "norm_fplus", gumbel.name(), v.size(),
                         stats::ks_statistic(v, gumbel), stats::ks_critical_95(v.size())});
    if (const auto gamma = ctx.records_variance_constant()) {
      const double mu = analytics::mean_records(n, cfg.d);
      const double sd = std::sqrt(*gamma * std::pow(std::log(static_cast<double>(n)), static_cast<double>(cfg.d)));
      v.clear();
      for (const auto* row : g) v.push_back((static_cast<double>(row->m) - mu) / sd);
      result.ks.push_back({Clock::obs, n, "records_standardized", normal.name(), v.size(),
                           stats::ks_statistic(v, normal), stats::ks_critical_95(v.size())});
    }
  }
  if (cfg.d >= 3) {
    // Records-time F+ only where every trial reached m.
    for (const auto& [m, g] : by_m) {
      if (m < 2 || g.size() != result.trials.size()) continue;
      std::vector<double> v;
      for (const auto* row : g) v.push_back(row->norm_fplus);
      result.ks.push_back({Clock::rec, m, "norm_fplus", gumbel.name(), v.size(),
                           stats::ks_statistic(v, gumbel), stats::ks_critical_95(v.size())});
    }
  }
}

/// Run every trial, `threads` at a time (0 = default_thread_count()). Trials
/// share no mutable state; results land in trial-index slots and are reduced
/// in that order, so the output does not depend on scheduling.
inline EnsembleResult run_ensemble(const ExperimentConfig& cfg, std::size_t threads = 0) {
  cfg.validate();
  EnsembleResult result;
  result.config = cfg;
  result.trials.resize(cfg.trials);
  if (threads == 0) threads = default_thread_count();
  threads = std::min(threads, cfg.trials);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1))
      result.trials[t] = run_trial(cfg, t);
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  aggregate(result);
  return result;
}

/// Invariants every emitted row must satisfy. Returns a
/// description of the first violation.
inline std::optional<std::string> check_row_invariants(const CheckpointRow& row, std::size_t d) {
  if (row.m != row.r + row.beta) return "R != r + beta";
  if (row.n >= 1 && row.r < 1) return "no current record";
  if (row.width != row.f_plus - row.f_minus) return "width != f_plus - f_minus";
  if (row.width < 0.0) return "negative width";
  if (row.f_minus > row.dim_max_min) return "f_minus exceeds min_j B+(j)";
  for (std::size_t k = 0; k < row.bhat.size(); ++k) {
    if (std::isnan(row.bhat[k])) continue;
    if (k > 0 && row.bhat[k] > row.bhat[k - 1]) return "bhat not nonincreasing";
    if (row.r >= k + 1 && row.f_minus > row.bhat[k]) return "f_minus exceeds bhat";
  }
  if (!row.bhat.empty() && row.n >= 1 && row.bhat[0] != row.f_plus) return "bhat_1 != f_plus";
  if (d == 1 && (row.width != 0.0 || row.r != 1)) return "d = 1 frontier is not a single point";
  return std::nullopt;
}

/// Literal check of {T_m <= n} = {R_n >= m} over every (m, n) pair recorded
/// in one trial's rows, plus strict increase of the records-time index.
inline bool check_switching_relation(const std::vector<CheckpointRow>& rows) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> epochs;  // (m, T_m)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;  // (n, R_n)
  for (const auto& row : rows) {
    if (row.clock == Clock::rec) {
      if (!epochs.empty() && row.m <= epochs.back().first) return false;
      epochs.emplace_back(row.m, row.n);
    }
    counts.emplace_back(row.n, row.m);
  }
  for (const auto& [m, t] : epochs) {
    for (const auto& [n, big_r] : counts) {
      if ((t <= n) != (big_r >= m)) return false;
    }
  }
  return true;
}

/// One dyadic window of the law-of-the-iterated-logarithm diagnostics.
///
/// Observation clock: a = (F+ - ln n) / ln ln n, b = (F- - ln n) / ln ln n,
/// over n in [2^k, 2^(k+1)), n >= 16.
/// Records clock: a = W / ln m, b = (F+ - (d! m)^(1/d)) / ln m, m >= 2.
/// The running_* columns accumulate over all windows so far.
struct LilWindow {
  std::size_t trial = 0;
  Clock clock = Clock::obs;
  std::uint64_t lo = 0, hi = 0;
  std::size_t rows = 0;
  double a_min = 0, a_max = 0, b_min = 0, b_max = 0;
  double running_a_min = 0, running_a_max = 0, running_b_min = 0, running_b_max = 0;
};

/// Running extremes of the normalized frontier processes, for inspection.
/// Infinitely-often statements cannot be decided from a finite trajectory;
/// nothing here is a pass/fail check.
inline std::vector<LilWindow> lil_diagnostics(const std::vector<CheckpointRow>& rows, std::size_t d) {
  std::vector<LilWindow> out;
  for (Clock clock : {Clock::obs, Clock::rec}) {
    std::map<std::pair<std::size_t, unsigned>, LilWindow> windows;
    for (const auto& row : rows) {
      if (row.clock != clock) continue;
      double a = 0, b = 0;
      std::uint64_t index = 0;
      if (clock == Clock::obs) {
        if (row.n < 16) continue;
        const double l1 = std::log(static_cast<double>(row.n));
        const double l2 = std::log(l1);
        a = (row.f_plus - l1) / l2;
        b = (row.f_minus - l1) / l2;
        index = row.n;
      } else {
        if (row.m < 2) continue;
        const double mm = static_cast<double>(row.m);
        const double lm = std::log(mm);
        a = row.width / lm;
        b = (row.f_plus - std::exp((analytics::log_factorial(d) + lm) / static_cast<double>(d))) / lm;
        index = row.m;
      }
      const auto k = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(index))));
      auto [it, fresh] = windows.try_emplace({row.trial, k});
      LilWindow& w = it->second;
      if (fresh) {
        w.trial = row.trial;
        w.clock = clock;
        w.lo = std::uint64_t{1} << k;
        w.hi = (std::uint64_t{1} << (k + 1)) - 1;
        w.a_min = w.a_max = a;
        w.b_min = w.b_max = b;
      }
      ++w.rows;
      w.a_min = std::min(w.a_min, a);
      w.a_max = std::max(w.a_max, a);
      w.b_min = std::min(w.b_min, b);
      w.b_max = std::max(w.b_max, b);
    }
    std::size_t trial = std::numeric_limits<std::size_t>::max();
    LilWindow run;
    for (auto& [key, w] : windows) {
      if (key.first != trial) {
        trial = key.first;
        run = w;
      }
      run.a_min = std::min(run.a_min, w.a_min);
      run.a_max = std::max(run.a_max, w.a_max);
      run.b_min = std::min(run.b_min, w.b_min);
      run.b_max = std::max(run.b_max, w.b_max);
      w.running_a_min = run.a_min;
      w.running_a_max = run.a_max;
      w.running_b_min = run.b_min;
      w.running_b_max = run.b_max;
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace pareto::harness
