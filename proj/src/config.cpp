#include "polyshannon/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include "json.hpp"
#include <sstream>

#include "polyshannon/errors.hpp"

namespace polyshannon {

const std::vector<std::string>& ExperimentConfig::modes() {
  static const std::vector<std::string> m{"kernel1d", "zeros", "decay", "reconstruct-sphere", "reconstruct-strip",
                                          "verify"};
  return m;
}

std::uint64_t fnv1a(const std::string& data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Per-key setters; `offset` locates the value for error messages.
using Setter = std::function<void(ExperimentConfig&, const std::string&, std::size_t)>;

long parse_long(const std::string& v, std::size_t offset, long lo, long hi) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used == v.size() && x >= lo && x <= hi) return x;
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got '" + v + "'",
                   offset);
}

double parse_double(const std::string& v, std::size_t offset) {
  // A trailing "pi" multiplies, so "64pi" is 64π.
  std::string body = v;
  double factor = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    body = trim(body.substr(0, body.size() - 2));
    if (!body.empty() && body.back() == '*') body = trim(body.substr(0, body.size() - 1));
    factor = std::numbers::pi;
    if (body.empty()) body = "1";
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(body, &used);
    if (used == body.size() && std::isfinite(x)) return x * factor;
  } catch (const std::exception&) {
  }
  throw ParseError("expected a number, got '" + v + "'", offset);
}

template <class T, class F>
std::vector<T> parse_list(const std::string& v, std::size_t offset, F&& item) {
  std::vector<T> out;
  std::string s = v;
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) throw ParseError("empty list element", offset);
    out.push_back(item(tok));
  }
  if (out.empty()) throw ParseError("empty list", offset);
  return out;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s{
      {"mode",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         const auto& m = ExperimentConfig::modes();
         if (std::find(m.begin(), m.end(), v) == m.end()) throw ParseError("unknown mode '" + v + "'", o);
         c.mode = v;
       }},
      {"family",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         if (v != "classical" && v != "radial" && v != "strip" && v != "custom")
           throw ParseError("family must be classical, radial, strip or custom", o);
         c.family = v;
       }},
      {"lambda",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         c.lambda = parse_list<double>(v, o, [&](const std::string& t) { return parse_double(t, o); });
         if (c.lambda->size() > 64) throw ParseError("at most 64 frequencies", o);
       }},
      {"k", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.k = int(parse_long(v, o, 0, 64)); }},
      {"n", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.n = int(parse_long(v, o, 2, 64)); }},
      {"p", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.p = int(parse_long(v, o, 1, 8)); }},
      {"cutoff",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         c.cutoff = parse_double(v, o);
         if (!(*c.cutoff > 0.0)) throw ParseError("cutoff must be positive", o);
       }},
      {"grid_points",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.grid_points = int(parse_long(v, o, 1, 1 << 24)); }},
      {"half_width",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         c.half_width = parse_double(v, o);
         if (!(*c.half_width >= 1.0 && *c.half_width <= 1000.0)) throw ParseError("half_width must be in [1, 1000]", o);
       }},
      {"max_degree",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.max_degree = int(parse_long(v, o, 0, 32)); }},
      {"j_min", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.j_min = int(parse_long(v, o, -1000, 1000)); }},
      {"j_max", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.j_max = int(parse_long(v, o, -1000, 1000)); }},
      {"queries",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.queries = int(parse_long(v, o, 1, 1000000)); }},
      {"k_max", [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.k_max = int(parse_long(v, o, 0, 32)); }},
      {"torus_dim",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) { c.torus_dim = int(parse_long(v, o, 1, 3)); }},
      {"degrees",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         c.degrees = parse_list<int>(v, o, [&](const std::string& t) { return int(parse_long(t, o, 0, 32)); });
       }},
      {"j_ranges",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         c.j_ranges = parse_list<int>(v, o, [&](const std::string& t) { return int(parse_long(t, o, 1, 1000)); });
       }},
      {"field", [](ExperimentConfig& c, const std::string& v, std::size_t) { c.field = v; }},
      {"seed",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         try {
           std::size_t used = 0;
           const unsigned long long x = std::stoull(v, &used);
           if (used == v.size() && v.front() != '-') {
             c.seed = x;
             return;
           }
         } catch (const std::exception&) {
         }
         throw ParseError("seed must be an unsigned 64-bit integer", o);
       }},
      {"cache_dir", [](ExperimentConfig& c, const std::string& v, std::size_t) { c.cache_dir = v; }},
      {"timing",
       [](ExperimentConfig& c, const std::string& v, std::size_t o) {
         if (v == "true" || v == "1") c.timing = true;
         else if (v == "false" || v == "0") c.timing = false;
         else throw ParseError("timing must be true or false", o);
       }},
  };
  return s;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value, std::size_t key_offset,
           std::size_t value_offset) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ParseError("unknown key '" + key + "'", key_offset);
  it->second(c, value, value_offset);
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ',';
      s += json_scalar(e);
    }
    return s;
  }
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  throw std::invalid_argument("unsupported JSON value");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
    }
    if (!j.is_object()) throw ParseError("JSON config must be an object", first);
    for (const auto& [key, value] : j.items()) {
      // Locate the key in the source for error offsets.
      const std::size_t at = text.find('"' + key + '"');
      const std::size_t off = at == std::string::npos ? first : at;
      try {
        apply(c, key, json_scalar(value), off, off);
      } catch (const std::invalid_argument&) {
        throw ParseError("unsupported value for '" + key + "'", off);
      }
    }
    return c;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line = text.substr(pos, end - pos);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      const auto eq = line.find('=');
      const std::size_t lead = line.find_first_not_of(" \t");
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", pos + lead);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const std::size_t value_at = pos + eq + 1 + std::min(line.substr(eq + 1).find_first_not_of(" \t"), line.size());
      if (key.empty()) throw ParseError("missing key", pos + lead);
      if (value.empty()) throw ParseError("missing value for '" + key + "'", value_at);
      apply(c, key, value, pos + lead, value_at);
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open config file " + path.string(), 0);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse(text);
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  const auto real = [](double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  };
  const auto ints = [](const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
  };
  if (mode) kv["mode"] = *mode;
  if (family) kv["family"] = *family;
  if (lambda) {
    std::string s;
    for (double x : *lambda) s += (s.empty() ? "" : ",") + real(x);
    kv["lambda"] = s;
  }
  if (k) kv["k"] = std::to_string(*k);
  if (n) kv["n"] = std::to_string(*n);
  if (p) kv["p"] = std::to_string(*p);
  if (cutoff) kv["cutoff"] = real(*cutoff);
  if (grid_points) kv["grid_points"] = std::to_string(*grid_points);
  if (half_width) kv["half_width"] = real(*half_width);
  if (max_degree) kv["max_degree"] = std::to_string(*max_degree);
  if (j_min) kv["j_min"] = std::to_string(*j_min);
  if (j_max) kv["j_max"] = std::to_string(*j_max);
  if (queries) kv["queries"] = std::to_string(*queries);
  if (k_max) kv["k_max"] = std::to_string(*k_max);
  if (torus_dim) kv["torus_dim"] = std::to_string(*torus_dim);
  if (degrees) kv["degrees"] = ints(*degrees);
  if (j_ranges) kv["j_ranges"] = ints(*j_ranges);
  if (field) kv["field"] = *field;
  if (seed) kv["seed"] = std::to_string(*seed);
  if (cache_dir) kv["cache_dir"] = *cache_dir;
  if (timing) kv["timing"] = *timing ? "true" : "false";
  std::string out;
  for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  return out;
}

std::string ExperimentConfig::hash() const { return hex16(fnv1a(canonical())); }

FrequencyGrid ExperimentConfig::grid() const {
  FrequencyGrid g;
  if (cutoff) g.cutoff = *cutoff;
  if (grid_points) g.samples = *grid_points;
  return g;
}

SpectrumVector ExperimentConfig::spectrum() const {
  const std::string fam = family.value_or(lambda ? "custom" : (k || n) ? "radial" : "classical");
  if (fam == "custom") {
    if (!lambda) throw std::invalid_argument("family = custom needs a lambda list");
    return SpectrumVector::from_values(*lambda);
  }
  if (lambda) throw std::invalid_argument("lambda is only valid with family = custom");
  const int pp = p.value_or(2);
  if (fam == "classical") return SpectrumVector::from_entries({{0.0, 2 * pp}});
  if (fam == "strip") return build_lambda_strip(k.value_or(0), pp);
  return build_lambda_radial(k.value_or(0), n.value_or(3), pp);
}

}  // namespace polyshannon
