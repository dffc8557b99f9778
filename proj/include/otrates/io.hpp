#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "otrates/measure.hpp"

namespace otrates {

// Flat key = value config. '#' starts a comment; values are whitespace-
// separated lists for the vector getters. Unknown keys are rejected against
// a per-command schema so typos cannot silently change an experiment.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& key) const;

  // Throws ConfigError when a key outside `allowed` is present.
  void reject_unknown_keys(const std::set<std::string>& allowed) const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
};

// Measure file format: text record with `dim`, `points` (row-major list)
// and `weights` keys.
DiscreteMeasure read_measure(const std::string& path);
void write_measure(const std::string& path, const DiscreteMeasure& measure);

// Deterministic formatting (round-trip precision, fixed layout) so reruns
// produce byte-identical artifacts.
std::string format_double(double v);

struct CsvTable {
  std::string schema;  // e.g. "rates"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Log-log scatter of (n, value) with the fitted line and a guide line of
// the predicted slope, emitted as a standalone SVG.
void write_loglog_svg(const std::string& path,
                      const std::vector<std::pair<double, double>>& points,
                      double fit_slope, double fit_intercept,
                      double guide_slope, const std::string& title);

}  // namespace otrates
