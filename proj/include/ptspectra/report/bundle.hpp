#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptspectra/report/config.hpp"
#include "ptspectra/scaling_graph.hpp"
#include "ptspectra/secular.hpp"
#include "ptspectra/shooting.hpp"
#include "ptspectra/stokes.hpp"

namespace ptspectra::report {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SpectrumEntry {
  ModelParams params;
  EigenvalueRecord record;
};

struct SecularScanRow {
  int n = 0;
  double L = 0;
  double emapped = 0;
  double action_total = 0, action_inner = 0, action_edge = 0, delta = 0;
  double residual_plus = 0, residual_minus = 0;
};

struct GraphEntry {
  ModelParams params;
  StokesGraph graph;
};

struct TaskStatus {
  std::string task;
  std::string detail;
  bool ok = true;
  std::string error;
};

struct ResultBundle {
  std::string config_digest;
  RunConfig config;
  std::string tool_version = "ptspectra 0.1.0";
  std::string timestamp;  // provenance only; never enters CSV output
  std::vector<SpectrumEntry> records;
  std::vector<ScalingBranch> branches;
  std::vector<GraphEntry> graphs;
  std::vector<SecularScanRow> secular_rows;
  std::vector<TaskStatus> status;
};

// ---- JSON (lossless round trip via shortest-round-trip doubles) ----

inline json to_json(const EigenvalueRecord& r) {
  return json{{"j", r.j},
              {"L", r.L},
              {"re_E", r.E.real()},
              {"im_E", r.E.imag()},
              {"re_Emapped", r.E_mapped.real()},
              {"im_Emapped", r.E_mapped.imag()},
              {"regime", regime_name(r.regime)},
              {"residual", r.residual}};
}

inline EigenvalueRecord record_from_json(const json& j) {
  EigenvalueRecord r;
  r.j = j.at("j").get<int>();
  r.L = j.at("L").get<double>();
  r.E = Complex(j.at("re_E").get<double>(), j.at("im_E").get<double>());
  r.E_mapped = Complex(j.at("re_Emapped").get<double>(),
                       j.at("im_Emapped").get<double>());
  std::string reg = j.at("regime").get<std::string>();
  r.regime = reg == "BT"   ? Regime::BT
             : reg == "BS" ? Regime::BS
             : reg == "CO" ? Regime::CO
                           : Regime::transition;
  r.residual = j.at("residual").get<double>();
  return r;
}

inline json to_json(const ScalingBranch& b) {
  json samples = json::array();
  for (auto& s : b.samples)
    samples.push_back({s.tau, s.emapped.real(), s.emapped.imag(),
                       s.slope.real(), s.slope.imag()});
  return json{{"n", b.n},
              {"tau_c", b.tau_c},
              {"e_c", b.e_c},
              {"im_monotone", b.im_monotone},
              {"samples", samples}};
}

inline ScalingBranch branch_from_json(const json& j) {
  ScalingBranch b;
  b.n = j.at("n").get<int>();
  b.tau_c = j.at("tau_c").get<double>();
  b.e_c = j.at("e_c").get<double>();
  b.im_monotone = j.at("im_monotone").get<bool>();
  for (auto& s : j.at("samples"))
    b.samples.push_back({s[0].get<double>(),
                         Complex(s[1].get<double>(), s[2].get<double>()),
                         Complex(s[3].get<double>(), s[4].get<double>())});
  return b;
}

inline json to_json(const StokesGraph& g) {
  json tps = json::array();
  for (auto& tp : g.tps)
    tps.push_back({tp.alpha.real(), tp.alpha.imag()});
  json lines = json::array();
  for (auto& l : g.lines) {
    json pl = json::array();
    for (Complex y : l.polyline) pl.push_back({y.real(), y.imag()});
    std::string kind = l.terminus.kind == TerminusKind::turning_point
                           ? "turning_point"
                       : l.terminus.kind == TerminusKind::boundary_hit
                           ? "boundary_hit"
                       : l.terminus.kind == TerminusKind::escaped ? "escaped"
                                                                  : "arc_budget";
    lines.push_back({{"origin", l.origin_tp},
                     {"direction", l.direction_index},
                     {"terminus_kind", kind},
                     {"terminus_index", l.terminus.index},
                     {"arc_length", l.arc_length},
                     {"polyline", pl}});
  }
  return json{{"re_emapped", g.emapped.real()},
              {"im_emapped", g.emapped.imag()},
              {"n", g.n},
              {"turning_points", tps},
              {"lines", lines},
              {"signature", g.signature()}};
}

inline json to_json(const ResultBundle& b) {
  json out;
  out["config_digest"] = b.config_digest;
  out["config"] = canonical_json(b.config);
  out["provenance"] = {{"tool", b.tool_version}, {"timestamp", b.timestamp}};
  json recs = json::array();
  for (auto& e : b.records) {
    json r = to_json(e.record);
    r["n"] = e.params.n;
    r["g"] = e.params.g;
    r["hbar"] = e.params.hbar;
    recs.push_back(r);
  }
  out["records"] = recs;
  json brs = json::array();
  for (auto& br : b.branches) brs.push_back(to_json(br));
  out["branches"] = brs;
  json grs = json::array();
  for (auto& g : b.graphs) {
    json e = to_json(g.graph);
    e["g"] = g.params.g;
    e["L"] = g.params.L;
    e["hbar"] = g.params.hbar;
    grs.push_back(e);
  }
  out["graphs"] = grs;
  json rows = json::array();
  for (auto& r : b.secular_rows)
    rows.push_back({{"n", r.n},
                    {"L", r.L},
                    {"emapped", r.emapped},
                    {"action_total", r.action_total},
                    {"action_inner", r.action_inner},
                    {"action_edge", r.action_edge},
                    {"delta", r.delta},
                    {"residual_plus", r.residual_plus},
                    {"residual_minus", r.residual_minus}});
  out["secular_scans"] = rows;
  json st = json::array();
  for (auto& s : b.status)
    st.push_back({{"task", s.task},
                  {"detail", s.detail},
                  {"ok", s.ok},
                  {"error", s.error}});
  out["task_status"] = st;
  return out;
}

inline ResultBundle bundle_from_json(const json& j) {
  ResultBundle b;
  b.config_digest = j.at("config_digest").get<std::string>();
  b.tool_version = j.at("provenance").at("tool").get<std::string>();
  b.timestamp = j.at("provenance").at("timestamp").get<std::string>();
  const json& cfg = j.at("config");
  b.config.n_list = cfg.at("model").at("n").get<std::vector<int>>();
  b.config.g = cfg.at("model").at("g").get<double>();
  b.config.L_grid = cfg.at("model").at("L").get<std::vector<double>>();
  b.config.hbar = cfg.at("model").at("hbar").get<double>();
  b.config.count = cfg.value("count", 20);
  for (auto& t : cfg.at("tasks"))
    b.config.tasks.push_back(task_names().at(t.get<std::string>()));
  for (auto& r : j.at("records")) {
    SpectrumEntry e;
    e.params = ModelParams{r.at("n").get<int>(), r.at("g").get<double>(),
                           r.at("L").get<double>(),
                           r.at("hbar").get<double>()};
    e.record = record_from_json(r);
    b.records.push_back(e);
  }
  for (auto& br : j.at("branches")) b.branches.push_back(branch_from_json(br));
  for (auto& r : j.at("secular_scans"))
    b.secular_rows.push_back({r.at("n").get<int>(), r.at("L").get<double>(),
                              r.at("emapped").get<double>(),
                              r.at("action_total").get<double>(),
                              r.at("action_inner").get<double>(),
                              r.at("action_edge").get<double>(),
                              r.at("delta").get<double>(),
                              r.at("residual_plus").get<double>(),
                              r.at("residual_minus").get<double>()});
  for (auto& gj : j.at("graphs")) {
    GraphEntry e;
    e.params = ModelParams{gj.at("n").get<int>(), gj.at("g").get<double>(),
                           gj.at("L").get<double>(),
                           gj.at("hbar").get<double>()};
    e.graph.emapped = Complex(gj.at("re_emapped").get<double>(),
                              gj.at("im_emapped").get<double>());
    e.graph.n = gj.at("n").get<int>();
    int k = 0;
    for (auto& tp : gj.at("turning_points"))
      e.graph.tps.push_back(
          {Complex(tp[0].get<double>(), tp[1].get<double>()), k++});
    for (auto& lj : gj.at("lines")) {
      StokesLine l;
      l.origin_tp = lj.at("origin").get<int>();
      l.direction_index = lj.at("direction").get<int>();
      l.arc_length = lj.at("arc_length").get<double>();
      std::string kind = lj.at("terminus_kind").get<std::string>();
      l.terminus.kind = kind == "turning_point" ? TerminusKind::turning_point
                        : kind == "boundary_hit" ? TerminusKind::boundary_hit
                        : kind == "escaped"      ? TerminusKind::escaped
                                                 : TerminusKind::arc_budget;
      l.terminus.index = lj.at("terminus_index").get<int>();
      for (auto& pt : lj.at("polyline"))
        l.polyline.push_back(Complex(pt[0].get<double>(), pt[1].get<double>()));
      e.graph.lines.push_back(std::move(l));
    }
    b.graphs.push_back(std::move(e));
  }
  return b;
}

// ---- CSV (versioned headers, 17 significant digits, LF endings) ----

inline constexpr const char* kSpectraCsvHeader =
    "n,g,L,hbar,j,Re_E,Im_E,Re_Emapped,Im_Emapped,regime,residual";
inline constexpr const char* kBranchCsvHeader = "n,tau,Re_E,Im_E";
inline constexpr const char* kSecularCsvHeader =
    "n,L,emapped,action_total,action_inner,action_edge,delta,residual_plus,"
    "residual_minus";

inline std::string spectra_csv(const std::vector<SpectrumEntry>& entries) {
  std::string out = std::string(kSpectraCsvHeader) + "\n";
  for (auto& e : entries) {
    out += std::to_string(e.params.n) + "," + fmt17(e.params.g) + "," +
           fmt17(e.params.L) + "," + fmt17(e.params.hbar) + "," +
           std::to_string(e.record.j) + "," + fmt17(e.record.E.real()) + "," +
           fmt17(e.record.E.imag()) + "," + fmt17(e.record.E_mapped.real()) +
           "," + fmt17(e.record.E_mapped.imag()) + "," +
           regime_name(e.record.regime) + "," + fmt17(e.record.residual) +
           "\n";
  }
  return out;
}

inline std::string branches_csv(const std::vector<ScalingBranch>& branches) {
  std::string out = std::string(kBranchCsvHeader) + "\n";
  for (auto& b : branches) {
    for (auto& s : b.samples)
      out += std::to_string(b.n) + "," + fmt17(s.tau) + "," +
             fmt17(s.emapped.real()) + "," + fmt17(s.emapped.imag()) + "\n";
    out += "# n=" + std::to_string(b.n) + " tau_c=" + fmt17(b.tau_c) +
           " E_c=" + fmt17(b.e_c) + "\n";
  }
  return out;
}

inline std::string secular_csv(const std::vector<SecularScanRow>& rows) {
  std::string out = std::string(kSecularCsvHeader) + "\n";
  for (auto& r : rows)
    out += std::to_string(r.n) + "," + fmt17(r.L) + "," + fmt17(r.emapped) +
           "," + fmt17(r.action_total) + "," + fmt17(r.action_inner) + "," +
           fmt17(r.action_edge) + "," + fmt17(r.delta) + "," +
           fmt17(r.residual_plus) + "," + fmt17(r.residual_minus) + "\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.write(bytes.data(), std::streamsize(bytes.size()));
}

}  // namespace ptspectra::report
