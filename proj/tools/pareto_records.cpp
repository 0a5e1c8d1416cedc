// pareto-records: simulation, analysis, exact evaluation, self-test and
// rendering front end.
//
// Exit codes: 0 success, 1 a check failed, 2 invalid usage or configuration,
// 3 I/O failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pareto/pareto_records.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pareto;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::size_t> d;
  std::optional<std::uint64_t> n_max;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> ratio;
  std::vector<std::uint64_t> checkpoints;
  std::optional<std::size_t> top_m;
  std::optional<std::size_t> bhat_columns;
  bool records_time = false;
  bool strip_check = false;
  std::string out_dir = "pareto-out";
  std::size_t threads = 0;
};

struct AnalyzeArgs {
  std::string in_dir;
  std::string out_dir;
};

struct ExactArgs {
  std::string op;
  std::map<std::string, double> values;
};

struct RenderArgs {
  std::string records;
  std::optional<std::size_t> d;
  std::optional<std::uint64_t> n;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::string out;
};

void print_summary_line(const json& j) { std::cout << j.dump() << std::endl; }

void write_reports(const fs::path& dir, const harness::EnsembleResult& result) {
  std::vector<harness::LilWindow> lil;
  for (const auto& rows : result.trials) {
    auto w = harness::lil_diagnostics(rows, result.config.d);
    lil.insert(lil.end(), w.begin(), w.end());
  }
  io::write_aggregate_csv(dir / "aggregate.csv", result.aggregate);
  io::write_ks_csv(dir / "ks.csv", result.ks);
  io::write_lil_csv(dir / "lil.csv", lil);
}

json ks_summary(const harness::EnsembleResult& result) {
  json out = json::array();
  for (const auto& k : result.ks) {
    if (k.clock == harness::Clock::obs && k.index != result.config.checkpoint_grid().back()) continue;
    out.push_back({{"clock", harness::clock_name(k.clock)},
                   {"index", k.index},
                   {"statistic", k.statistic},
                   {"reference", k.reference},
                   {"ks", k.ks}});
  }
  return out;
}

int run_simulate(const SimulateArgs& a) {
  harness::ExperimentConfig cfg;
  if (!a.config.empty()) io::apply_config_json(cfg, io::read_json_file(a.config));
  if (a.d) cfg.d = *a.d;
  if (a.n_max) cfg.n_max = *a.n_max;
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.ratio) cfg.checkpoint_ratio = *a.ratio;
  if (!a.checkpoints.empty()) cfg.checkpoints = a.checkpoints;
  if (a.top_m) cfg.top_m = *a.top_m;
  if (a.bhat_columns) cfg.bhat_columns = *a.bhat_columns;
  if (a.records_time) cfg.records_time = true;
  if (a.strip_check) cfg.strip_check = true;
  cfg.validate();

  const fs::path dir(a.out_dir);
  try {
    fs::create_directory(dir);
  } catch (const fs::filesystem_error& e) {
    throw io::IoError(std::string("cannot create output directory: ") + e.what());
  }
  const auto result = harness::run_ensemble(cfg, a.threads);
  io::write_config_json(dir / "config.json", cfg);
  io::write_trials_csv(dir / "trials.csv", cfg, result.trials);
  write_reports(dir, result);

  std::size_t rows = 0;
  for (const auto& t : result.trials) rows += t.size();
  print_summary_line({{"command", "simulate"},
                      {"out_dir", dir.string()},
                      {"d", cfg.d},
                      {"n_max", cfg.n_max},
                      {"trials", cfg.trials},
                      {"master_seed", cfg.master_seed},
                      {"rows", rows},
                      {"ks", ks_summary(result)}});
  return 0;
}

int run_analyze(const AnalyzeArgs& a) {
  const fs::path in(a.in_dir);
  const fs::path out = a.out_dir.empty() ? in : fs::path(a.out_dir);
  harness::EnsembleResult result;
  result.config = io::config_from_json(io::read_json_file(in / "config.json"));
  result.trials = io::read_trials_csv(in / "trials.csv");
  if (result.trials.size() != result.config.trials)
    throw harness::ConfigError("trials.csv holds " + std::to_string(result.trials.size()) +
                               " trials, config says " + std::to_string(result.config.trials));

  std::size_t rows = 0, violations = 0, switching_failures = 0;
  json first_violation = nullptr;
  for (const auto& trial : result.trials) {
    for (const auto& row : trial) {
      ++rows;
      if (const auto v = harness::check_row_invariants(row, result.config.d)) {
        if (violations++ == 0)
          first_violation = {{"trial", row.trial}, {"n", row.n}, {"what", *v}};
      }
    }
    if (!harness::check_switching_relation(trial)) ++switching_failures;
  }
  harness::aggregate(result);
  if (!a.out_dir.empty()) fs::create_directory(out);
  write_reports(out, result);

  print_summary_line({{"command", "analyze"},
                      {"in_dir", in.string()},
                      {"rows", rows},
                      {"trials", result.trials.size()},
                      {"invariant_violations", violations},
                      {"first_violation", first_violation},
                      {"switching_failures", switching_failures},
                      {"ks", ks_summary(result)}});
  return violations == 0 && switching_failures == 0 ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// exact

struct ExactOp {
  std::vector<std::string> params;
  double (*eval)(const std::map<std::string, double>&);
};

std::uint64_t as_count(const std::map<std::string, double>& v, const std::string& key) {
  const double x = v.at(key);
  if (!(x >= 0.0) || x != std::floor(x) || x > 9007199254740992.0)
    throw UsageError("--" + key + " must be a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

const std::map<std::string, ExactOp>& exact_ops() {
  using V = std::map<std::string, double>;
  static const std::map<std::string, ExactOp> ops = {
      {"p_record", {{"n", "d"}, [](const V& v) { return analytics::p_record(as_count(v, "n"), as_count(v, "d")); }}},
      {"mean_remaining",
       {{"n", "d"}, [](const V& v) { return analytics::mean_remaining(as_count(v, "n"), as_count(v, "d")); }}},
      {"mean_records",
       {{"n", "d"}, [](const V& v) { return analytics::mean_records(as_count(v, "n"), as_count(v, "d")); }}},
      {"y_density",
       {{"n", "d", "y"},
        [](const V& v) { return analytics::y_density(as_count(v, "n"), as_count(v, "d"), v.at("y")); }}},
      {"sample_y",
       {{"n", "d", "seed", "trial"},
        [](const V& v) {
          RandomStream s(as_count(v, "seed"), as_count(v, "trial"));
          return analytics::sample_y(s, as_count(v, "n"), as_count(v, "d"));
        }}},
      {"gamma_derivative",
       {{"j"}, [](const V& v) { return analytics::gamma_derivative(static_cast<int>(as_count(v, "j"))); }}},
      {"gumbel_cdf", {{"x"}, [](const V& v) { return analytics::gumbel_cdf(v.at("x")); }}},
      {"normal_cdf", {{"x"}, [](const V& v) { return analytics::normal_cdf(v.at("x")); }}},
      {"fplus_centering",
       {{"n", "d"}, [](const V& v) { return analytics::fplus_centering(v.at("n"), as_count(v, "d")); }}},
      {"tm_centering",
       {{"m", "d"}, [](const V& v) { return analytics::tm_centering(v.at("m"), as_count(v, "d")); }}},
      {"records_time_fplus_centering",
       {{"m", "d"},
        [](const V& v) { return analytics::records_time_fplus_centering(v.at("m"), as_count(v, "d")); }}},
      {"asym_mean_records",
       {{"n", "d", "order"},
        [](const V& v) {
          return analytics::asym_mean_records(v.at("n"), as_count(v, "d"), as_count(v, "order"));
        }}},
      {"lower_bound_probability",
       {{"n", "b", "d"},
        [](const V& v) { return lower_bound_probability(v.at("n"), v.at("b"), as_count(v, "d")); }}},
  };
  return ops;
}

int run_exact(const ExactArgs& a) {
  const auto& ops = exact_ops();
  const auto it = ops.find(a.op);
  if (it == ops.end()) throw UsageError("unknown exact op '" + a.op + "'");
  const std::set<std::string> wanted(it->second.params.begin(), it->second.params.end());
  for (const auto& [k, _] : a.values)
    if (!wanted.count(k)) throw UsageError(a.op + " does not take --" + k);
  for (const auto& k : it->second.params)
    if (!a.values.count(k)) throw UsageError(a.op + " requires --" + k);

  json args = json::object();
  for (const auto& k : it->second.params) {
    const double v = a.values.at(k);
    if (v == std::floor(v) && std::abs(v) < 9007199254740992.0)
      args[k] = static_cast<std::int64_t>(v);
    else
      args[k] = v;
  }
  double value = 0.0;
  try {
    value = it->second.eval(a.values);
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
  std::cout << "{\"op\":" << json(a.op).dump() << ",\"args\":" << args.dump()
            << ",\"value\":" << (std::isfinite(value) ? io::format_double(value) : "null") << "}" << std::endl;
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest(const std::string& fault) {
  if (!fault.empty()) {
    if (fault != "dominance") throw UsageError("unknown fault '" + fault + "'");
    testing::flip_dominance = true;
  }
  const auto results = selftest::run_all();
  testing::flip_dominance = false;
  bool ok = true;
  std::printf("%-18s %-6s %8s %9s\n", "suite", "status", "checks", "seconds");
  for (const auto& r : results) {
    std::printf("%-18s %-6s %8zu %9.3f\n", r.name.c_str(), r.passed ? "pass" : "FAIL", r.checks, r.seconds);
    ok = ok && r.passed;
  }
  for (const auto& r : results)
    if (!r.passed) std::printf("failed: %s: %s\n", r.name.c_str(), r.failure.c_str());
  return ok ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// render

std::vector<std::vector<double>> read_points_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io::IoError("cannot open " + path.string());
  std::vector<std::vector<double>> pts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ss(line);
    std::vector<double> p;
    std::string tok;
    bool numeric = true;
    while (ss >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        numeric = false;
        break;
      }
      p.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw UsageError(path.string() + ": non-numeric line '" + line + "'");
    }
    first = false;
    if (!p.empty()) pts.push_back(std::move(p));
  }
  return pts;
}

int run_render(const RenderArgs& a) {
  if (a.d && *a.d != 2) throw UsageError("render draws d = 2 frontiers only");
  if (a.records.empty() == !a.n) throw UsageError("render needs exactly one of --records or --n");
  RecordBook book(2);
  if (!a.records.empty()) {
    for (const auto& p : read_points_file(a.records)) {
      if (p.size() != 2) throw UsageError("render draws d = 2 frontiers only; found a point of dimension " +
                                          std::to_string(p.size()));
      book.observe(Point(p));
    }
  } else {
    RandomStream stream(a.seed, a.trial);
    std::vector<double> x(2);
    for (std::uint64_t i = 0; i < *a.n; ++i) {
      sample_observation_into(stream, x);
      book.observe(x);
    }
  }
  const std::string doc = svg::render(book);
  if (a.out.empty() || a.out == "-") {
    std::cout << doc;
  } else {
    std::ofstream out(a.out);
    if (!out) throw io::IoError("cannot create " + a.out);
    out << doc;
    if (!out) throw io::IoError("write failed: " + a.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto records: simulation, exact analytics and frontier geometry"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a seeded ensemble and write CSV reports");
  simulate->add_option("--config", sim.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  simulate->add_option("--d", sim.d, "Dimension");
  simulate->add_option("--n-max", sim.n_max, "Observations per trial");
  simulate->add_option("--trials", sim.trials, "Number of trials");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--checkpoint-ratio", sim.ratio, "Ratio of the geometric checkpoint grid");
  simulate->add_option("--checkpoints", sim.checkpoints, "Explicit observation checkpoints");
  simulate->add_option("--top-m", sim.top_m, "Depth of the top coordinate-sum tracker");
  simulate->add_option("--bhat-columns", sim.bhat_columns, "bhat_k columns per row");
  simulate->add_flag("--records-time", sim.records_time, "Also emit a row at every record epoch");
  simulate->add_flag("--strip-check", sim.strip_check, "Also compute strip coverage");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory (its parent must exist)");
  simulate->add_option("--threads", sim.threads, "Worker threads (default: THREADS or core count)");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "Recompute reports and re-check invariants of a run");
  analyze->add_option("--in-dir", ana.in_dir, "Directory written by simulate")->required();
  analyze->add_option("--out-dir", ana.out_dir, "Where to write reports (default: --in-dir)");

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Evaluate one analytic quantity and print JSON");
  exact->add_option("op", ex.op, "Operation")->required();
  for (const char* k : {"n", "d", "m", "y", "x", "j", "b", "order", "seed", "trial"}) {
    exact->add_option_function<double>(std::string("--") + k, [&ex, k](double v) { ex.values[k] = v; });
  }

  std::string fault;
  auto* self = app.add_subcommand("selftest", "Run the oracle and identity suites");
  self->add_option("--inject-fault", fault, "Deliberately break a component (dominance)");

  RenderArgs ren;
  auto* render = app.add_subcommand("render", "Draw a two-dimensional record frontier as SVG");
  render->add_option("--records", ren.records, "Text file of points, one per line");
  render->add_option("--d", ren.d, "Dimension (must be 2)");
  render->add_option("--n", ren.n, "Simulate this many observations instead");
  render->add_option("--seed", ren.seed, "Master seed for --n");
  render->add_option("--trial", ren.trial, "Trial index for --n");
  render->add_option("--out", ren.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*analyze) return run_analyze(ana);
    if (*exact) return run_exact(ex);
    if (*self) return run_selftest(fault);
    if (*render) return run_render(ren);
  } catch (const harness::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
