#include "polyshannon/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace polyshannon {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RunReport::RunReport(std::string command, std::string config_hash, std::uint64_t seed) {
  header_.emplace_back("format_version", std::to_string(format_version));
  header_.emplace_back("command", std::move(command));
  header_.emplace_back("config_hash", std::move(config_hash));
  header_.emplace_back("seed", std::to_string(seed));
}

void RunReport::note(const std::string& key, const std::string& value) { header_.emplace_back(key, value); }

const CheckResult& RunReport::check_le(const std::string& name, double measured, double bound, std::string detail) {
  record({name, measured, bound, measured <= bound, std::move(detail)});
  return checks_.back();
}

const CheckResult& RunReport::check_ge(const std::string& name, double measured, double bound, std::string detail) {
  record({name, measured, bound, measured >= bound, std::move(detail)});
  return checks_.back();
}

void RunReport::record(CheckResult result) { checks_.push_back(std::move(result)); }

bool RunReport::all_passed() const { return failures() == 0; }

std::size_t RunReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

void RunReport::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : header_) os << "# " << k << " = " << v << "\r\n";
  os << "check,measured,bound,pass,detail\r\n";
  for (const auto& c : checks_) {
    os << csv_field(c.name) << ',' << format_double(c.measured) << ',' << format_double(c.bound) << ','
       << (c.pass ? "true" : "false") << ',' << csv_field(c.detail) << "\r\n";
  }
}

void RunReport::write_json(std::ostream& os) const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header_) header[k] = v;
  j["header"] = header;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    rows.push_back({{"name", c.name},
                    {"measured", format_double(c.measured)},
                    {"bound", format_double(c.bound)},
                    {"pass", c.pass},
                    {"detail", c.detail}});
  }
  j["checks"] = rows;
  j["failures"] = failures();
  os << j.dump(2) << '\n';
}

void RunReport::save(const std::filesystem::path& dir, const std::string& stem) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / (stem + ".csv"), std::ios::binary);
    write_csv(os);
  }
  std::ofstream os(dir / (stem + ".json"), std::ios::binary);
  write_json(os);
}

}  // namespace polyshannon
