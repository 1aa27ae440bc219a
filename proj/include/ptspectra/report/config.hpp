#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"

namespace ptspectra::report {

using nlohmann::json;

enum class Task {
  spectrum,
  branches,
  scaling_graph,
  stokes_graph,
  secular_scan,
  linear_exact
};

inline const std::map<std::string, Task>& task_names() {
  static const std::map<std::string, Task> m = {
      {"spectrum", Task::spectrum},
      {"branches", Task::branches},
      {"scaling_graph", Task::scaling_graph},
      {"stokes_graph", Task::stokes_graph},
      {"secular_scan", Task::secular_scan},
      {"linear_exact", Task::linear_exact}};
  return m;
}

inline std::string task_name(Task t) {
  for (auto& [k, v] : task_names())
    if (v == t) return k;
  return "?";
}

struct RunConfig {
  std::vector<int> n_list;
  double g = 1.0;
  std::vector<double> L_grid;
  double hbar = 1.0;
  std::vector<Task> tasks;
  std::map<std::string, double> tolerances;
  std::string output_dir = "out";
  std::map<std::string, double> seed_overrides;
  int count = 20;
  std::vector<Complex> stokes_emapped;  // optional sample energies

  double tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

namespace detail {

[[noreturn]] inline void bad(const std::string& pointer,
                             const std::string& what) {
  throw ConfigInvalid(pointer + ": " + what);
}

inline Complex parse_complex(const std::string& s, const std::string& ptr) {
  // forms: "1.5", "0.3-0.4i", "-2i", "i"
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) bad(ptr, "empty complex literal");
  bool has_i = t.back() == 'i' || t.back() == 'j';
  if (!has_i) {
    try {
      size_t used = 0;
      double re = std::stod(t, &used);
      if (used != t.size()) bad(ptr, "trailing characters in number");
      return {re, 0.0};
    } catch (const std::exception&) {
      bad(ptr, "not a number");
    }
  }
  t.pop_back();
  // split at the last +/- that is not an exponent sign and not leading
  size_t split = std::string::npos;
  for (size_t i = t.size(); i-- > 1;) {
    char c = t[i];
    if ((c == '+' || c == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (split == std::string::npos) {
      if (t.empty() || t == "+") return {0.0, 1.0};
      if (t == "-") return {0.0, -1.0};
      return {0.0, std::stod(t)};
    }
    double re = std::stod(t.substr(0, split));
    std::string ims = t.substr(split);
    if (ims == "+") return {re, 1.0};
    if (ims == "-") return {re, -1.0};
    return {re, std::stod(ims)};
  } catch (const std::exception&) {
    bad(ptr, "not a complex number");
  }
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  RunConfig c;
  if (!j.is_object()) detail::bad("", "config must be a JSON object");
  if (!j.contains("model") || !j["model"].is_object())
    detail::bad("/model", "required object");
  const json& m = j["model"];
  if (!m.contains("n") || !m["n"].is_array() || m["n"].empty())
    detail::bad("/model/n", "required non-empty array of integers");
  for (size_t i = 0; i < m["n"].size(); ++i) {
    const json& v = m["n"][i];
    if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 15)
      detail::bad("/model/n/" + std::to_string(i), "integer in [0, 15]");
    c.n_list.push_back(v.get<int>());
  }
  if (!m.contains("g") || !m["g"].is_number() || m["g"].get<double>() <= 0)
    detail::bad("/model/g", "positive number required");
  c.g = m["g"].get<double>();
  if (!m.contains("L") || !m["L"].is_array() || m["L"].empty())
    detail::bad("/model/L", "required non-empty array");
  for (size_t i = 0; i < m["L"].size(); ++i) {
    const json& v = m["L"][i];
    if (!v.is_number() || v.get<double>() <= 0)
      detail::bad("/model/L/" + std::to_string(i), "positive number required");
    c.L_grid.push_back(v.get<double>());
  }
  for (size_t i = 0; i + 1 < c.L_grid.size(); ++i)
    if (c.L_grid[i] >= c.L_grid[i + 1])
      detail::bad("/model/L", "grid must be strictly increasing");
  if (m.contains("hbar")) {
    if (!m["hbar"].is_number() || m["hbar"].get<double>() <= 0)
      detail::bad("/model/hbar", "positive number required");
    c.hbar = m["hbar"].get<double>();
  }
  if (!j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty())
    detail::bad("/tasks", "required non-empty array");
  for (size_t i = 0; i < j["tasks"].size(); ++i) {
    const json& v = j["tasks"][i];
    std::string ptr = "/tasks/" + std::to_string(i);
    if (!v.is_string()) detail::bad(ptr, "string task name required");
    auto it = task_names().find(v.get<std::string>());
    if (it == task_names().end())
      detail::bad(ptr, "unknown task '" + v.get<std::string>() + "'");
    c.tasks.push_back(it->second);
  }
  if (std::find(c.tasks.begin(), c.tasks.end(), Task::linear_exact) !=
      c.tasks.end()) {
    if (std::find(c.n_list.begin(), c.n_list.end(), 0) == c.n_list.end())
      detail::bad("/tasks", "linear_exact requires 0 in /model/n");
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object())
      detail::bad("/tolerances", "object of numbers required");
    for (auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number())
        detail::bad("/tolerances/" + k, "number required");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      detail::bad("/output_dir", "string required");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed_overrides")) {
    if (!j["seed_overrides"].is_object())
      detail::bad("/seed_overrides", "object of numbers required");
    for (auto& [k, v] : j["seed_overrides"].items()) {
      if (!v.is_number())
        detail::bad("/seed_overrides/" + k, "number required");
      c.seed_overrides[k] = v.get<double>();
    }
  }
  if (j.contains("count")) {
    if (!j["count"].is_number_integer() || j["count"].get<int>() < 1 ||
        j["count"].get<int>() > 60)
      detail::bad("/count", "integer in [1, 60] required");
    c.count = j["count"].get<int>();
  }
  if (j.contains("stokes_emapped")) {
    if (!j["stokes_emapped"].is_array())
      detail::bad("/stokes_emapped", "array of complex strings required");
    for (size_t i = 0; i < j["stokes_emapped"].size(); ++i) {
      const json& v = j["stokes_emapped"][i];
      std::string ptr = "/stokes_emapped/" + std::to_string(i);
      if (!v.is_string()) detail::bad(ptr, "complex string required");
      c.stokes_emapped.push_back(
          detail::parse_complex(v.get<std::string>(), ptr));
    }
  }
  return c;
}

// canonical JSON form used for the content digest
inline json canonical_json(const RunConfig& c) {
  json m;
  m["n"] = c.n_list;
  m["g"] = c.g;
  m["L"] = c.L_grid;
  m["hbar"] = c.hbar;
  json out;
  out["model"] = m;
  std::vector<std::string> names;
  for (Task t : c.tasks) names.push_back(task_name(t));
  out["tasks"] = names;
  out["tolerances"] = c.tolerances;
  out["count"] = c.count;
  out["seed_overrides"] = c.seed_overrides;
  if (!c.stokes_emapped.empty()) {
    std::vector<std::vector<double>> v;
    for (Complex z : c.stokes_emapped) v.push_back({z.real(), z.imag()});
    out["stokes_emapped"] = v;
  }
  return out;
}

inline std::string config_digest(const RunConfig& c) {
  std::string s = canonical_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ptspectra::report
