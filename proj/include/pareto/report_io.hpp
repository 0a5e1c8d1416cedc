#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pareto/harness.hpp"

namespace pareto::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest form that round-trips: 17 significant digits, "nan" and
/// "inf"/"-inf" for non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("not a number: '" + s + "'");
  return v;
}

inline std::uint64_t parse_count(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end == s.c_str() || *end != '\0')
    throw IoError("not a count: '" + s + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Configuration JSON

namespace detail {

inline std::uint64_t json_count(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw harness::ConfigError(std::string(key) + " must be an integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw harness::ConfigError(std::string(key) + " must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

inline bool json_flag(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw harness::ConfigError(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

}  // namespace detail

/// Reads the keys present in `j` over `cfg`. Unknown keys are rejected.
inline void apply_config_json(harness::ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw harness::ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      cfg.d = detail::json_count(j, "d");
    } else if (key == "n_max") {
      cfg.n_max = detail::json_count(j, "n_max");
    } else if (key == "trials") {
      cfg.trials = detail::json_count(j, "trials");
    } else if (key == "master_seed") {
      cfg.master_seed = detail::json_count(j, "master_seed");
    } else if (key == "checkpoint_ratio") {
      if (!value.is_number()) throw harness::ConfigError("checkpoint_ratio must be a number");
      cfg.checkpoint_ratio = value.get<double>();
    } else if (key == "checkpoints") {
      if (value.is_null()) {
        cfg.checkpoints.reset();
        continue;
      }
      if (!value.is_array()) throw harness::ConfigError("checkpoints must be an array or null");
      std::vector<std::uint64_t> list;
      for (const auto& c : value) {
        if (!c.is_number_integer() || (!c.is_number_unsigned() && c.get<std::int64_t>() < 0))
          throw harness::ConfigError("checkpoints must be nonnegative integers");
        list.push_back(c.get<std::uint64_t>());
      }
      cfg.checkpoints = std::move(list);
    } else if (key == "top_m") {
      cfg.top_m = detail::json_count(j, "top_m");
    } else if (key == "bhat_columns") {
      cfg.bhat_columns = detail::json_count(j, "bhat_columns");
    } else if (key == "records_time") {
      cfg.records_time = detail::json_flag(j, "records_time");
    } else if (key == "strip_check") {
      cfg.strip_check = detail::json_flag(j, "strip_check");
    } else {
      throw harness::ConfigError("unknown config key '" + key + "'");
    }
  }
}

inline harness::ExperimentConfig config_from_json(const nlohmann::json& j) {
  harness::ExperimentConfig cfg;
  apply_config_json(cfg, j);
  cfg.validate();
  return cfg;
}

inline nlohmann::json config_to_json(const harness::ExperimentConfig& cfg) {
  nlohmann::json j;
  j["d"] = cfg.d;
  j["n_max"] = cfg.n_max;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["checkpoint_ratio"] = cfg.checkpoint_ratio;
  j["checkpoints"] = cfg.checkpoints ? nlohmann::json(*cfg.checkpoints) : nlohmann::json(nullptr);
  j["top_m"] = cfg.top_m;
  j["bhat_columns"] = cfg.bhat_columns;
  j["records_time"] = cfg.records_time;
  j["strip_check"] = cfg.strip_check;
  return j;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw harness::ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

inline std::vector<std::string> trial_columns(std::size_t bhat_columns, bool strip) {
  std::vector<std::string> cols = {"trial", "clock", "n", "m", "r", "beta",
                                   "f_minus", "f_plus", "width", "dim_max_min"};
  for (std::size_t k = 1; k <= bhat_columns; ++k) cols.push_back("bhat_" + std::to_string(k));
  for (const char* c : {"norm_fplus", "norm_width", "norm_r"}) cols.emplace_back(c);
  if (strip) cols.emplace_back("strip");
  return cols;
}

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot create " + path.string());
  }
  void line(const std::vector<std::string>& fields) { out_ << join(fields) << '\n'; }
  void close() {
    out_.flush();
    if (!out_) throw IoError("write failed: " + path_.string());
    out_.close();
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace detail

inline std::vector<std::string> row_fields(const harness::CheckpointRow& row, bool strip) {
  std::vector<std::string> f = {std::to_string(row.trial),
                                harness::clock_name(row.clock),
                                std::to_string(row.n),
                                std::to_string(row.m),
                                std::to_string(row.r),
                                std::to_string(row.beta),
                                format_double(row.f_minus),
                                format_double(row.f_plus),
                                format_double(row.width),
                                format_double(row.dim_max_min)};
  for (double b : row.bhat) f.push_back(format_double(b));
  f.push_back(format_double(row.norm_fplus));
  f.push_back(format_double(row.norm_width));
  f.push_back(format_double(row.norm_r));
  if (strip) f.push_back(format_double(row.strip));
  return f;
}

inline void write_trials_csv(const std::filesystem::path& path, const harness::ExperimentConfig& cfg,
                             const std::vector<std::vector<harness::CheckpointRow>>& trials) {
  detail::CsvFile f(path);
  f.line(trial_columns(cfg.bhat_columns, cfg.strip_check));
  for (const auto& rows : trials)
    for (const auto& row : rows) f.line(row_fields(row, cfg.strip_check));
  f.close();
}

inline void write_aggregate_csv(const std::filesystem::path& path,
                                const std::vector<harness::AggregateRow>& rows) {
  detail::CsvFile f(path);
  f.line({"clock", "index", "statistic", "count", "mean", "sd", "min", "q25", "median", "q75", "max"});
  for (const auto& a : rows) {
    const auto& s = a.summary;
    f.line({harness::clock_name(a.clock), std::to_string(a.index), a.statistic, std::to_string(s.count),
            format_double(s.mean), format_double(s.sd), format_double(s.min), format_double(s.q25),
            format_double(s.median), format_double(s.q75), format_double(s.max)});
  }
  f.close();
}

inline void write_ks_csv(const std::filesystem::path& path, const std::vector<harness::KsRow>& rows) {
  detail::CsvFile f(path);
  f.line({"clock", "index", "statistic", "reference", "count", "ks", "critical_95"});
  for (const auto& k : rows) {
    f.line({harness::clock_name(k.clock), std::to_string(k.index), k.statistic, k.reference,
            std::to_string(k.count), format_double(k.ks), format_double(k.critical95)});
  }
  f.close();
}

inline void write_lil_csv(const std::filesystem::path& path, const std::vector<harness::LilWindow>& windows) {
  detail::CsvFile f(path);
  f.line({"trial", "clock", "lo", "hi", "rows", "a_min", "a_max", "b_min", "b_max", "running_a_min",
          "running_a_max", "running_b_min", "running_b_max"});
  for (const auto& w : windows) {
    f.line({std::to_string(w.trial), harness::clock_name(w.clock), std::to_string(w.lo),
            std::to_string(w.hi), std::to_string(w.rows), format_double(w.a_min), format_double(w.a_max),
            format_double(w.b_min), format_double(w.b_max), format_double(w.running_a_min),
            format_double(w.running_a_max), format_double(w.running_b_min),
            format_double(w.running_b_max)});
  }
  f.close();
}

inline void write_config_json(const std::filesystem::path& path, const harness::ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

/// Parse a trials.csv back into per-trial row lists (trial order preserved).
/// The bhat column count and the strip column are taken from the header.
inline std::vector<std::vector<harness::CheckpointRow>> read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing header");
  const auto header = detail::split(line);
  std::size_t bhat = 0;
  for (const auto& h : header)
    if (h.rfind("bhat_", 0) == 0) ++bhat;
  const bool strip = !header.empty() && header.back() == "strip";
  if (header != trial_columns(bhat, strip)) throw IoError(path.string() + ": unexpected header");

  std::vector<std::vector<harness::CheckpointRow>> trials;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split(line);
    if (f.size() != header.size())
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    try {
      harness::CheckpointRow row;
      std::size_t i = 0;
      row.trial = parse_count(f[i++]);
      const std::string& clock = f[i++];
      if (clock != "obs" && clock != "rec") throw IoError("bad clock '" + clock + "'");
      row.clock = clock == "obs" ? harness::Clock::obs : harness::Clock::rec;
      row.n = parse_count(f[i++]);
      row.m = parse_count(f[i++]);
      row.r = parse_count(f[i++]);
      row.beta = parse_count(f[i++]);
      row.f_minus = parse_double(f[i++]);
      row.f_plus = parse_double(f[i++]);
      row.width = parse_double(f[i++]);
      row.dim_max_min = parse_double(f[i++]);
      for (std::size_t k = 0; k < bhat; ++k) row.bhat.push_back(parse_double(f[i++]));
      row.norm_fplus = parse_double(f[i++]);
      row.norm_width = parse_double(f[i++]);
      row.norm_r = parse_double(f[i++]);
      if (strip) row.strip = parse_double(f[i++]);
      if (row.trial >= trials.size()) trials.resize(row.trial + 1);
      trials[row.trial].push_back(std::move(row));
    } catch (const IoError& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trials;
}

}  // namespace pareto::io
