#pragma once

#include <string>
#include <variant>
#include <vector>

#include "extcond/extractor.hpp"
#include "extcond/model.hpp"

namespace extcond {

// Flat key -> value map written as JSON with floats at 17 significant
// digits (round-trip exact) or as 6-significant-digit text. Sub-reports
// nest one level (the game block inside a condenser report).
class Report {
 public:
  void put(const std::string& key, double v);
  void put_int(const std::string& key, long long v);
  void put_bool(const std::string& key, bool v);
  void put_string(const std::string& key, const std::string& v);
  void put_array(const std::string& key, const std::vector<double>& v);
  void put_report(const std::string& key, Report sub);

  std::string to_json() const;
  std::string to_text() const;

  // Byte comparison after dropping the volatile keys ("timestamp" and any
  // key starting with "timing").
  static bool equivalent(const std::string& json_a, const std::string& json_b);

 private:
  struct Entry;
  using Value = std::variant<double, long long, bool, std::string, std::vector<double>,
                             std::vector<Entry>>;
  struct Entry {
    std::string key;
    Value value;
  };
  std::vector<Entry> entries_;

  static void write_json(const std::vector<Entry>& entries, std::string& out);
  static void write_text(const std::vector<Entry>& entries, const std::string& prefix,
                         std::string& out);
};

struct ReportOptions {
  std::vector<int> q_dims{1, 2};
  extractor::SeesawOptions seesaw;
  double eps = 0.1;
  long long enumeration_limit = 1LL << 22;
  double tol = 1e-7;
  std::uint64_t seed = 1;
};

Report build_extractor_report(const FunctionFamily& fam, double k, const ReportOptions& opts);
Report build_condenser_report(const FunctionFamily& fam, double k, double k_prime,
                              const ReportOptions& opts);
Report build_game_report(const FunctionFamily& fam, double k, double k_prime,
                         const ReportOptions& opts);

}  // namespace extcond
