#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bargmann::report {

struct Check {
  std::string id;
  std::string description;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string identity;  // the relation being exercised
};

// passed <=> measured <= tolerance; NaN never passes
inline Check make_check(std::string id, std::string description, double measured, double tolerance,
                        std::string identity = {}) {
  const bool ok = std::isfinite(measured) && measured <= tolerance;
  return {std::move(id), std::move(description), measured, tolerance, ok, std::move(identity)};
}

struct VerificationReport {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  void add(Check c) {
    for (const auto& e : checks)
      if (e.id == c.id) throw std::logic_error("duplicate check id: " + c.id);
    checks.push_back(std::move(c));
  }
  void append(const VerificationReport& other) {
    for (const auto& c : other.checks) add(c);
  }
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += !c.passed;
    return n;
  }
};

// 17 significant digits; non-finite values become strings so the JSON stays valid
inline nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline double from_number(const nlohmann::ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  return s == "inf" ? HUGE_VAL : -HUGE_VAL;
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["passed"] = r.all_passed();
  j["failures"] = r.failures();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    arr.push_back({{"id", c.id},
                   {"description", c.description},
                   {"measured", number(c.measured)},
                   {"tolerance", number(c.tolerance)},
                   {"passed", c.passed},
                   {"identity", c.identity}});
  j["metadata"] = r.metadata;
  return j;
}

inline VerificationReport from_json(const nlohmann::ordered_json& j) {
  VerificationReport r;
  r.suite = j.at("suite").get<std::string>();
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("id").get<std::string>(), c.at("description").get<std::string>(), from_number(c.at("measured")),
                        from_number(c.at("tolerance")), c.at("passed").get<bool>(), c.at("identity").get<std::string>()});
  if (j.contains("metadata")) r.metadata = j.at("metadata");
  return r;
}

// JSON text with doubles at 17 significant digits
inline std::string dump(const nlohmann::ordered_json& j, int indent = 2) {
  std::string out;
  std::function<void(const nlohmann::ordered_json&, int)> rec = [&](const nlohmann::ordered_json& v, int depth) {
    const std::string pad(indent > 0 ? static_cast<std::size_t>(indent * (depth + 1)) : 0, ' ');
    const std::string close(indent > 0 ? static_cast<std::size_t>(indent * depth) : 0, ' ');
    const char* nl = indent > 0 ? "\n" : "";
    if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      out += buf;
    } else if (v.is_object()) {
      if (v.empty()) { out += "{}"; return; }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) { out += ","; out += nl; }
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + (indent > 0 ? ": " : ":");
        rec(it.value(), depth + 1);
      }
      out += nl + close + "}";
    } else if (v.is_array()) {
      if (v.empty()) { out += "[]"; return; }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) { out += ","; out += nl; }
        out += pad;
        rec(v[i], depth + 1);
      }
      out += nl + close + "]";
    } else {
      out += v.dump();
    }
  };
  rec(j, 0);
  return out;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat key = value configuration. Blank lines and lines starting with '#' are ignored.
class RunConfig {
 public:
  struct Entry {
    double value;
    double lo, hi;
    bool integer;
    std::string help;
  };

  RunConfig() {
    def("hermite_nodes", 96, 8, 400, true, "source Gauss-Hermite nodes for the classical transform");
    def("halfline_nodes", 64, 8, 180, true, "source Gauss-Laguerre nodes for half-line transforms");
    def("check_nodes", 12, 2, 40, true, "source nodes at which inverse transforms are compared");
    def("plane_nodes", 60, 8, 200, true, "nodes per axis of the Gaussian plane rule");
    def("disk_radial", 32, 4, 400, true, "radial rings of inverse-transform disk rules");
    def("disk_angular", 256, 8, 4096, true, "minimum angular points per ring");
    def("disk_ring_factor", 60, 0, 1000, false, "ring r carries max(disk_angular, ring_factor/(1-r)) points");
    def("dirichlet_points", 200, 8, 180 + 400, true, "half-line points (alpha = 1/2) for the Dirichlet kernel integral");
    def("omega_T", 40, 1, 200, false, "omega grid end point");
    def("omega_h", 1e-3, 1e-5, 1.0, false, "omega grid step");
    def("series_terms", 0, 0, 20000, true, "series truncation J (0 chooses from |z|)");
    def("coefficient_terms", 8, 1, 64, true, "degree of random coefficient vectors");
    def("random_vectors", 20, 1, 200, true, "random coefficient vectors per isometry check");
    def("fd_step", 1e-3, 1e-6, 0.1, false, "finite-difference step");
    def("seed", 20240601, 0, 4294967295.0, true, "random seed");
    def("tol_scale", 1, 1e-6, 1e6, false, "multiplies every tolerance");
  }

  double get(const std::string& key) const { return entry(key).value; }
  int get_int(const std::string& key) const { return static_cast<int>(std::llround(entry(key).value)); }

  void set(const std::string& key, double v) {
    auto& e = entry(key);
    if (!(v >= e.lo && v <= e.hi))
      throw std::invalid_argument("config " + key + " = " + fmt17(v) + " outside [" + fmt17(e.lo) + ", " + fmt17(e.hi) + "]");
    if (e.integer && v != std::floor(v)) throw std::invalid_argument("config " + key + " must be an integer");
    e.value = v;
  }

  void set(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("config " + key + ": not a number: " + text);
    set(key, v);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  void load(std::istream& in, const std::string& origin = "config") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      if (!has(key)) throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key " + key);
      set(key, trim(line.substr(eq + 1)));
    }
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    load(in, path);
  }

  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [k, e] : entries_) os << k << " = " << fmt17(e.value) << "\n";
    return os.str();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, e] : entries_) j[k] = e.value;
    return j;
  }

  double tol(double base) const { return base * get("tol_scale"); }

 private:
  std::map<std::string, Entry> entries_;

  void def(const std::string& k, double v, double lo, double hi, bool integer, std::string help) {
    entries_[k] = {v, lo, hi, integer, std::move(help)};
  }
  Entry& entry(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::invalid_argument("unknown config key " + key);
    return it->second;
  }
  const Entry& entry(const std::string& key) const { return const_cast<RunConfig*>(this)->entry(key); }
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }
};

inline constexpr const char* config_env_var = "BARGMANN_CONFIG";

}  // namespace bargmann::report
