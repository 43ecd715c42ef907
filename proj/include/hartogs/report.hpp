#pragma once

// Report records produced by the scenario harness, with deterministic JSON and
// CSV emission. Doubles are printed in shortest round-trip form in JSON and
// with 17 significant digits in CSV; neither depends on locale. Reports embed
// the effective configuration so a run can be reproduced byte-for-byte.

#include <charconv>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hartogs/exact.hpp"

namespace hartogs {

enum class ScenarioVerdict { Pass, Fail, Measured };

inline std::string to_string(ScenarioVerdict v) {
  switch (v) {
    case ScenarioVerdict::Pass: return "Pass";
    case ScenarioVerdict::Fail: return "Fail";
    case ScenarioVerdict::Measured: return "Measured";
  }
  return "?";
}

// One measured (or exactly computed) quantity; becomes one CSV row.
struct Measurement {
  std::string quantity;
  double value = 0.0;
  double error = 0.0;          // 0 for exact results
  std::string verdict = "Measured";
  std::string exact;           // closed form when available, e.g. "15/32 pi^2"
};

struct VerificationReport {
  std::string id;
  std::string claim;
  std::vector<std::pair<std::string, std::string>> parameters;  // effective values
  std::string claimed;   // headline target, textual (may be a closed form)
  std::string computed;  // headline result, textual
  std::vector<Measurement> measurements;
  double tolerance = 1e-8;
  ScenarioVerdict verdict = ScenarioVerdict::Measured;
  double runtime_seconds = 0.0;
};

// --- number formatting -----------------------------------------------------------

inline std::string format_shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline std::string exact_string(const PiValue& v) {
  std::string s = to_string(v.coeff);
  if (v.pi_pow == 1) s += " pi";
  if (v.pi_pow >= 2) s += " pi^" + std::to_string(v.pi_pow);
  return s;
}

// --- rational parameter parsing --------------------------------------------------

// Accepts "a/b", integers, and decimal/scientific literals.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat num(BigInt(s.substr(0, slash)));
    Rat den(BigInt(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in " + s);
    return num / den;
  }
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('E') == std::string::npos)
    return Rat(BigInt(s));
  size_t used = 0;
  double d = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad numeric literal: " + s);
  return rat_from_double(d);
}

// --- JSON -------------------------------------------------------------------------

using json = nlohmann::ordered_json;

inline json measurement_to_json(const Measurement& m) {
  json j;
  j["quantity"] = m.quantity;
  j["value"] = m.value;
  j["error"] = m.error;
  j["verdict"] = m.verdict;
  if (!m.exact.empty()) j["exact"] = m.exact;
  return j;
}

inline json report_to_json(const VerificationReport& r) {
  json j;
  j["scenario"] = r.id;
  j["claim"] = r.claim;
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["claimed"] = r.claimed;
  j["computed"] = r.computed;
  json ms = json::array();
  for (const auto& m : r.measurements) ms.push_back(measurement_to_json(m));
  j["measurements"] = ms;
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

inline std::string reports_to_json_text(const std::vector<VerificationReport>& reports,
                                        const std::string& config_ini) {
  json j;
  j["generator"] = "hartogs-toolkit";
  j["format_version"] = 1;
  j["config"] = config_ini;
  json arr = json::array();
  int pass = 0, fail = 0, measured = 0;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    switch (r.verdict) {
      case ScenarioVerdict::Pass: ++pass; break;
      case ScenarioVerdict::Fail: ++fail; break;
      case ScenarioVerdict::Measured: ++measured; break;
    }
  }
  j["reports"] = arr;
  j["summary"] = {{"pass", pass}, {"fail", fail}, {"measured", measured}};
  return j.dump(2) + "\n";
}

// --- CSV --------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string reports_to_csv_text(const std::vector<VerificationReport>& reports) {
  std::string out = "scenario,parameters,quantity,value,error_estimate,verdict\n";
  for (const auto& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.parameters) {
      if (!params.empty()) params += ';';
      params += k + "=" + v;
    }
    for (const auto& m : r.measurements) {
      out += csv_escape(r.id) + ',' + csv_escape(params) + ',' + csv_escape(m.quantity) +
             ',' + format_sig17(m.value) + ',' + format_sig17(m.error) + ',' +
             csv_escape(m.verdict) + '\n';
    }
  }
  return out;
}

// --- flat config format -----------------------------------------------------------
//
// Sections per scenario plus a [global] section; '#' and ';' start comments.

struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  const std::string* find(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
};

namespace detail {
inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

inline ConfigFile parse_config(const std::string& text) {
  ConfigFile cfg;
  std::string section = "global";
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections[section][key] = val;
  }
  return cfg;
}

// Canonical form: [global] first, then one section per report in run order,
// carrying the effective parameter values.
inline std::string serialize_config(
    const std::vector<std::pair<std::string, std::string>>& global,
    const std::vector<VerificationReport>& reports) {
  std::string out = "[global]\n";
  for (const auto& [k, v] : global) out += k + " = " + v + "\n";
  for (const auto& r : reports) {
    out += "\n[" + r.id + "]\n";
    for (const auto& [k, v] : r.parameters) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace hartogs
