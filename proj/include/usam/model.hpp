#pragma once

// System model: traffic classes, shared-system parameters, config parsing.
//
// Unit policy: durations are milliseconds, rates are 1/second.  The only
// place a conversion happens is where a formula mixes the two (factor
// kMsPerSec); config files use the same units as the structs.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace usam {

inline constexpr double kMsPerSec = 1000.0;

enum class Cls : int { M = 0, SC = 1, FC = 2, S = 3 };
inline constexpr int kNumCls = 4;
inline constexpr std::array<Cls, kNumCls> kAllCls{Cls::M, Cls::SC, Cls::FC, Cls::S};
inline constexpr std::array<const char*, kNumCls> kClsName{"M", "SC", "FC", "S"};

inline int idx(Cls c) { return static_cast<int>(c); }
inline const char* name(Cls c) { return kClsName[idx(c)]; }

inline Cls class_from_name(const std::string& s) {
  for (Cls c : kAllCls)
    if (s == kClsName[idx(c)]) return c;
  throw std::invalid_argument("unknown traffic class '" + s + "'");
}

struct ClassSpec {
  Cls cls = Cls::M;
  int priority = 0;          // higher rank is served first
  double c_max_ms = 0.0;     // upper support of the service time
  double deadline_ms = 0.0;
  double sfrt_ms = 0.0;      // per-class safe-function response budget
  double gamma = 1.0;        // payload integrity factor in (0,1]
  double mix = 0.0;          // share of the offered load
  bool is_monitoring = false;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SystemConfig {
  std::array<ClassSpec, kNumCls> classes{};
  double mu = 0.0;           // nominal service rate, 1/s
  double v_max_ms = 0.0;     // receiver cycle length
  double lambda_s = 0.0;     // offered event rate at rho=1, 1/s
  double w1 = 0.0, w2 = 0.0, w3 = 0.0;
  double delta_tar_ms = 150.0;
  double sfrt_star_ms = 0.0;
  double epsilon = 0.0;
  double alpha = 0.0;
  double rho_max = 0.0;
  double s_min_ms = 0.05;    // lower support of every service distribution

  const ClassSpec& spec(Cls c) const { return classes[idx(c)]; }
  ClassSpec& spec(Cls c) { return classes[idx(c)]; }

  std::vector<Cls> monitoring() const {
    std::vector<Cls> out;
    for (const auto& cs : classes)
      if (cs.is_monitoring) out.push_back(cs.cls);
    return out;
  }
};

// Classes with a strictly higher priority rank than k.
inline std::vector<Cls> hp(const SystemConfig& cfg, Cls k) {
  std::vector<Cls> out;
  for (const auto& cs : cfg.classes)
    if (cs.priority > cfg.spec(k).priority) out.push_back(cs.cls);
  return out;
}

// Per-class arrival rates lambda_k(rho) = rho * lambda_s * mix_k, in 1/s.
inline std::array<double, kNumCls> arrival_rates(const SystemConfig& cfg, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::domain_error("rho must lie in [0,1]");
  std::array<double, kNumCls> out{};
  for (int k = 0; k < kNumCls; ++k)
    out[k] = rho * cfg.lambda_s * cfg.classes[k].mix;
  return out;
}

inline double total_arrival_rate(const SystemConfig& cfg, double rho) {
  double sum = 0.0;
  for (double v : arrival_rates(cfg, rho)) sum += v;
  return sum;
}

// Offered utilisation of the duty-cycled server, lambda / (mu * delta).
inline double utilization(const SystemConfig& cfg, double rho, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("delta must lie in (0,1]");
  return total_arrival_rate(cfg, rho) / (cfg.mu * delta);
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawTable {
  std::map<std::string, std::string> kv;
  bool present = false;
};

inline double parse_number(const std::string& section, const std::string& key,
                           const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "' in [" + section + "]: " + text);
  }
}

inline bool parse_bool(const std::string& section, const std::string& key,
                       const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("bad boolean value for '" + key + "' in [" + section + "]: " + text);
}

}  // namespace detail

inline void validate(const SystemConfig& cfg);

// Parses the TOML-style subset used by the preset files: [table] headers,
// scalar `key = value` pairs, and `#` comments.  Unknown tables or keys are
// rejected so that typos surface as errors instead of silent defaults.
inline SystemConfig parse_config(const std::string& text) {
  using detail::RawTable;
  std::map<std::string, RawTable> tables;
  std::string current;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed table header on line " + std::to_string(lineno));
      current = detail::trim(line.substr(1, line.size() - 2));
      tables[current].present = true;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' on line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("expected 'key = value' on line " + std::to_string(lineno));
    if (current.empty())
      throw ConfigError("key '" + key + "' appears before any [table] header");
    auto& tbl = tables[current].kv;
    if (!tbl.emplace(key, val).second)
      throw ConfigError("duplicate key '" + key + "' in [" + current + "]");
  }

  static const std::set<std::string> kSystemKeys{
      "mu",      "v_max_ms", "lambda_s",     "w1",      "w2",       "w3",
      "delta_tar_ms", "sfrt_star_ms", "epsilon", "alpha", "rho_max", "s_min_ms"};
  static const std::set<std::string> kClassKeys{
      "priority", "c_max_ms", "deadline_ms", "sfrt_ms", "gamma", "mix", "is_monitoring"};

  for (const auto& [tname, tbl] : tables) {
    const bool is_class = tname.rfind("class.", 0) == 0;
    if (tname != "system" && !is_class)
      throw ConfigError("unknown table [" + tname + "]");
    if (is_class) class_from_name(tname.substr(6));  // throws on bad names
    const auto& allowed = is_class ? kClassKeys : kSystemKeys;
    for (const auto& [k, v] : tbl.kv)
      if (!allowed.count(k))
        throw ConfigError("unknown key '" + k + "' in [" + tname + "]");
  }

  if (!tables.count("system")) throw ConfigError("missing table [system]");
  auto& sys = tables["system"].kv;
  auto sys_num = [&](const char* key) {
    auto it = sys.find(key);
    if (it == sys.end())
      throw ConfigError(std::string("missing key '") + key + "' in [system]");
    return detail::parse_number("system", key, it->second);
  };

  SystemConfig cfg;
  cfg.mu = sys_num("mu");
  cfg.v_max_ms = sys_num("v_max_ms");
  cfg.lambda_s = sys_num("lambda_s");
  cfg.w1 = sys_num("w1");
  cfg.w2 = sys_num("w2");
  cfg.w3 = sys_num("w3");
  cfg.sfrt_star_ms = sys_num("sfrt_star_ms");
  cfg.epsilon = sys_num("epsilon");
  cfg.alpha = sys_num("alpha");
  cfg.rho_max = sys_num("rho_max");
  if (sys.count("delta_tar_ms"))
    cfg.delta_tar_ms = detail::parse_number("system", "delta_tar_ms", sys["delta_tar_ms"]);
  if (sys.count("s_min_ms"))
    cfg.s_min_ms = detail::parse_number("system", "s_min_ms", sys["s_min_ms"]);

  for (Cls c : kAllCls) {
    std::string tname = std::string("class.") + name(c);
    if (!tables.count(tname)) throw ConfigError("missing table [" + tname + "]");
    auto& tbl = tables[tname].kv;
    auto num = [&](const char* key) {
      auto it = tbl.find(key);
      if (it == tbl.end())
        throw ConfigError(std::string("missing key '") + key + "' in [" + tname + "]");
      return detail::parse_number(tname, key, it->second);
    };
    ClassSpec cs;
    cs.cls = c;
    cs.priority = static_cast<int>(num("priority"));
    cs.c_max_ms = num("c_max_ms");
    cs.deadline_ms = num("deadline_ms");
    cs.sfrt_ms = num("sfrt_ms");
    cs.gamma = num("gamma");
    cs.mix = num("mix");
    auto it = tbl.find("is_monitoring");
    if (it == tbl.end())
      throw ConfigError("missing key 'is_monitoring' in [" + tname + "]");
    cs.is_monitoring = detail::parse_bool(tname, "is_monitoring", it->second);
    cfg.spec(c) = cs;
  }

  validate(cfg);
  return cfg;
}

inline void validate(const SystemConfig& cfg) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(cfg.mu, "mu");
  positive(cfg.v_max_ms, "v_max_ms");
  positive(cfg.lambda_s, "lambda_s");
  positive(cfg.sfrt_star_ms, "sfrt_star_ms");
  positive(cfg.delta_tar_ms, "delta_tar_ms");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0))
    throw ConfigError("epsilon must lie in (0,1]");
  if (!(cfg.alpha >= 1.0)) throw ConfigError("alpha must be >= 1");
  if (!(cfg.rho_max > 0.0 && cfg.rho_max <= 1.0))
    throw ConfigError("rho_max must lie in (0,1]");
  if (!(cfg.w1 >= 0.0 && cfg.w2 >= 0.0 && cfg.w3 >= 0.0))
    throw ConfigError("weights w1..w3 must be non-negative");
  if (!(cfg.s_min_ms >= 0.0)) throw ConfigError("s_min_ms must be non-negative");

  double mix_sum = 0.0;
  double min_cmax = std::numeric_limits<double>::infinity();
  std::set<int> prios;
  for (const auto& cs : cfg.classes) {
    std::string who = std::string("[class.") + name(cs.cls) + "]";
    if (!(cs.c_max_ms > 0.0)) throw ConfigError("c_max_ms must be positive in " + who);
    if (!(cs.deadline_ms > 0.0)) throw ConfigError("deadline_ms must be positive in " + who);
    if (!(cs.sfrt_ms > 0.0)) throw ConfigError("sfrt_ms must be positive in " + who);
    if (!(cs.gamma > 0.0 && cs.gamma <= 1.0))
      throw ConfigError("gamma must lie in (0,1] in " + who);
    if (!(cs.mix >= 0.0 && cs.mix <= 1.0))
      throw ConfigError("mix must lie in [0,1] in " + who);
    mix_sum += cs.mix;
    min_cmax = std::min(min_cmax, cs.c_max_ms);
    prios.insert(cs.priority);
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "class mix must sum to 1 (got " << mix_sum << ")";
    throw ConfigError(os.str());
  }
  if (prios.size() != static_cast<size_t>(kNumCls))
    throw ConfigError("class priorities must be distinct");
  if (cfg.s_min_ms > min_cmax)
    throw ConfigError("s_min_ms must not exceed the smallest c_max_ms");
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace usam
