#pragma once

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <mutex>
#include <thread>
#include <vector>

#include "ptspectra/linear_model.hpp"
#include "ptspectra/report/bundle.hpp"

namespace ptspectra::report {

inline int worker_count(size_t units) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 2;
  if (const char* env = std::getenv("PTSPECTRA_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v < 1024) hw = unsigned(v);
  }
  return int(std::min<size_t>(hw, std::max<size_t>(units, 1)));
}

namespace detail {

struct WorkUnit {
  Task task;
  int n = 0;
  double L = 0;     // unused for per-n tasks
  bool per_L = false;
};

struct UnitResult {
  std::vector<SpectrumEntry> records;
  std::vector<ScalingBranch> branches;
  std::vector<GraphEntry> graphs;
  std::vector<SecularScanRow> secular_rows;
  TaskStatus status;
};

inline Regime classify_exact(Complex E, const ModelParams& p, double e_c) {
  Complex em = p.map_energy(E);
  if (std::abs(E.imag()) > kTolRealClassify * std::abs(E)) return Regime::CO;
  if (std::abs(em.real() - e_c) <= 0.1 * e_c) return Regime::transition;
  return em.real() > e_c ? Regime::BT : Regime::BS;
}

inline UnitResult run_unit(const WorkUnit& u, const RunConfig& cfg) {
  UnitResult out;
  out.status.task = task_name(u.task);
  out.status.detail =
      "n=" + std::to_string(u.n) +
      (u.per_L ? " L=" + fmt17(u.L) : std::string());
  ModelParams p{u.n, cfg.g, u.per_L ? u.L : cfg.L_grid.front(), cfg.hbar};
  switch (u.task) {
    case Task::spectrum: {
      auto spec = find_spectrum(p, cfg.count);
      if (!spec.complete) {
        out.status.ok = false;
        out.status.error = spec.diagnostics;
      }
      for (auto& r : spec.records) out.records.push_back({p, r});
      break;
    }
    case Task::branches: {
      auto table = track_branches(ModelParams{u.n, cfg.g, 1.0, cfg.hbar},
                                  cfg.L_grid, cfg.count);
      for (size_t k = 0; k < table.per_L.size(); ++k) {
        ModelParams pl{u.n, cfg.g, cfg.L_grid[k], cfg.hbar};
        for (auto& r : table.per_L[k]) out.records.push_back({pl, r});
      }
      std::string ev;
      for (auto& e : table.events) ev += e + "; ";
      if (table.branch_swap_suspected) ev += "BranchSwapSuspected; ";
      out.status.detail += ev.empty() ? "" : (" [" + ev + "]");
      break;
    }
    case Task::scaling_graph: {
      out.branches.push_back(
          integrate_branch(u.n, cfg.tolerance("ode", 1e-10)));
      break;
    }
    case Task::stokes_graph: {
      std::vector<Complex> samples = cfg.stokes_emapped;
      if (samples.empty()) {
        ScalingBranch br = integrate_branch(u.n, 1e-10);
        samples = {Complex(br.e_c / 10, 0), Complex(br.e_c, 0),
                   Complex(10 * br.e_c, 0), br.eval(0.5 * br.tau_c)};
      }
      for (Complex em : samples)
        out.graphs.push_back({p, build_graph(em, u.n)});
      break;
    }
    case Task::secular_scan: {
      ScalingBranch br = integrate_branch(u.n, 1e-10);
      for (int i = 0; i < 50; ++i) {
        double em = br.e_c * (0.25 + 1.75 * double(i) / 49.0);
        SecularData d = secular_data(em * p.potential_scale(), p);
        auto [rp, rm] = secular_residuals(em * p.potential_scale(), p);
        out.secular_rows.push_back({u.n, p.L, em, d.action_total,
                                    d.action_inner, d.action_edge, d.delta,
                                    rp, rm});
      }
      break;
    }
    case Task::linear_exact: {
      ModelParams p0{0, cfg.g, u.L, cfg.hbar};
      ScalingBranch br = scaling_graph_n0();
      auto exact = linear_exact_spectrum(p0, cfg.count);
      std::vector<EigenvalueRecord> recs;
      for (auto& ev : exact) {
        EigenvalueRecord r;
        r.L = p0.L;
        r.E = ev.E;
        r.E_mapped = p0.map_energy(ev.E);
        r.residual = ev.residual;
        r.regime = classify_exact(ev.E, p0, br.e_c);
        recs.push_back(r);
      }
      shooting_detail::sort_and_index(recs);
      for (auto& r : recs) out.records.push_back({p0, r});
      break;
    }
  }
  return out;
}

}  // namespace detail

// Execute every task of the config over a bounded worker pool. Unit
// failures are recorded in the bundle status and never abort the run;
// results are merged in deterministic unit order.
inline ResultBundle run(const RunConfig& cfg) {
  std::vector<detail::WorkUnit> units;
  for (Task t : cfg.tasks) {
    switch (t) {
      case Task::spectrum:
      case Task::secular_scan:
        for (int n : cfg.n_list)
          for (double L : cfg.L_grid) units.push_back({t, n, L, true});
        break;
      case Task::branches:
      case Task::scaling_graph:
      case Task::stokes_graph:
        for (int n : cfg.n_list) units.push_back({t, n, 0, false});
        break;
      case Task::linear_exact:
        for (double L : cfg.L_grid) units.push_back({t, 0, L, true});
        break;
    }
  }

  std::vector<detail::UnitResult> results(units.size());
  std::atomic<size_t> next{0};
  int workers = worker_count(units.size());
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= units.size()) break;
      try {
        results[i] = detail::run_unit(units[i], cfg);
      } catch (const std::exception& e) {
        results[i].status.task = task_name(units[i].task);
        results[i].status.ok = false;
        results[i].status.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ResultBundle bundle;
  bundle.config = cfg;
  bundle.config_digest = config_digest(cfg);
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ",
                std::gmtime(&now));
  bundle.timestamp = stamp;
  for (auto& r : results) {
    bundle.records.insert(bundle.records.end(), r.records.begin(),
                          r.records.end());
    bundle.branches.insert(bundle.branches.end(), r.branches.begin(),
                           r.branches.end());
    bundle.graphs.insert(bundle.graphs.end(), r.graphs.begin(),
                         r.graphs.end());
    bundle.secular_rows.insert(bundle.secular_rows.end(),
                               r.secular_rows.begin(), r.secular_rows.end());
    bundle.status.push_back(r.status);
  }
  return bundle;
}

}  // namespace ptspectra::report
