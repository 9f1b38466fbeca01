#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace polyshannon {

struct CheckResult {
  std::string name;
  double measured;
  double bound;
  bool pass;
  std::string detail;
};

/// Append-only record of a run: header (provenance, defaults applied) and checks.
/// Written as RFC-4180 CSV and as JSON; both carry the same rows.
class RunReport {
 public:
  static constexpr int format_version = 1;

  RunReport(std::string command, std::string config_hash, std::uint64_t seed);

  void note(const std::string& key, const std::string& value);
  /// pass = measured ≤ bound (NaN fails).
  const CheckResult& check_le(const std::string& name, double measured, double bound, std::string detail = {});
  const CheckResult& check_ge(const std::string& name, double measured, double bound, std::string detail = {});
  void record(CheckResult result);

  const std::vector<CheckResult>& checks() const { return checks_; }
  const std::vector<std::pair<std::string, std::string>>& header() const { return header_; }
  bool all_passed() const;
  std::size_t failures() const;

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  void save(const std::filesystem::path& dir, const std::string& stem) const;

 private:
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<CheckResult> checks_;
};

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);
/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace polyshannon
