// ptspectra: spectra, scaling graphs and Stokes graphs of the IR-truncated
// H = p^2 - g (i x)^{2n+1} models, with reproducible CSV/JSON/SVG output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptspectra/ptspectra.hpp"

namespace fs = std::filesystem;
using namespace ptspectra;
namespace rep = ptspectra::report;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

rep::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigInvalid("cannot open " + path);
  rep::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("JSON parse error: ") + e.what());
  }
  return j;
}

std::vector<int> parse_n_range(const std::string& s) {
  std::vector<int> out;
  auto add_token = [&](const std::string& tok) {
    auto dots = tok.find("..");
    if (dots != std::string::npos) {
      int a = std::stoi(tok.substr(0, dots));
      int b = std::stoi(tok.substr(dots + 2));
      for (int n = a; n <= b; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoi(tok));
    }
  };
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) add_token(tok);
  if (out.empty()) throw ConfigInvalid("-n: empty range");
  for (int n : out)
    if (n < 0 || n > 15) throw ConfigInvalid("-n: values must be in 0..15");
  return out;
}

void write_bundle_outputs(const rep::ResultBundle& bundle,
                          const std::string& dir) {
  fs::create_directories(dir);
  rep::write_file(dir + "/bundle.json", rep::to_json(bundle).dump(2) + "\n");
  if (!bundle.records.empty())
    rep::write_file(dir + "/spectra.csv", rep::spectra_csv(bundle.records));
  if (!bundle.branches.empty())
    rep::write_file(dir + "/scaling_branches.csv",
                    rep::branches_csv(bundle.branches));
  if (!bundle.secular_rows.empty())
    rep::write_file(dir + "/secular_scan.csv",
                    rep::secular_csv(bundle.secular_rows));
}

int cmd_run(const std::string& config_path) {
  rep::RunConfig cfg = rep::parse_config(load_json(config_path));
  rep::ResultBundle bundle = rep::run(cfg);
  write_bundle_outputs(bundle, cfg.output_dir);
  int failed = 0;
  for (auto& s : bundle.status)
    if (!s.ok) {
      ++failed;
      std::cerr << "task " << s.task << " (" << s.detail
                << ") failed: " << s.error << "\n";
    }
  std::cout << "bundle " << bundle.config_digest << ": "
            << bundle.records.size() << " records, "
            << bundle.branches.size() << " branches, "
            << bundle.graphs.size() << " graphs -> " << cfg.output_dir
            << "\n";
  return failed == 0 ? kExitOk : kExitNumerical;
}

int cmd_validate(const std::string& config_path) {
  rep::RunConfig cfg = rep::parse_config(load_json(config_path));
  std::cout << "valid; digest " << rep::config_digest(cfg) << "\n";
  return kExitOk;
}

int cmd_spectrum(int n, double g, double L, double hbar, int count,
                 const std::string& out_dir) {
  ModelParams p{n, g, L, hbar};
  auto spec = find_spectrum(p, count);
  std::vector<rep::SpectrumEntry> entries;
  for (auto& r : spec.records) entries.push_back({p, r});
  std::string csv = rep::spectra_csv(entries);
  std::cout << csv;
  if (!spec.complete) std::cerr << spec.diagnostics << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    rep::write_file(out_dir + "/spectra.csv", csv);
  }
  return spec.complete ? kExitOk : kExitNumerical;
}

int cmd_scaling_graph(const std::string& n_range, double tol,
                      const std::string& out_dir) {
  std::vector<ScalingBranch> branches;
  for (int n : parse_n_range(n_range))
    branches.push_back(integrate_branch(n, tol));
  std::string csv = rep::branches_csv(branches);
  std::cout << csv;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    rep::write_file(out_dir + "/scaling_branches.csv", csv);
  }
  return kExitOk;
}

int cmd_stokes(int n, const std::string& emapped_str,
               const std::string& out_dir) {
  Complex em = rep::detail::parse_complex(emapped_str, "--emapped");
  StokesGraph g = build_graph(em, n);
  std::cout << "emapped = " << em.real() << (em.imag() < 0 ? " - " : " + ")
            << std::abs(em.imag()) << "i, n = " << n << "\n";
  std::cout << "signature: " << g.signature() << "\n";
  for (auto& l : g.lines) {
    std::cout << "  tp" << l.origin_tp << " dir" << l.direction_index
              << " -> ";
    switch (l.terminus.kind) {
      case TerminusKind::turning_point:
        std::cout << "turning_point(" << l.terminus.index << ")";
        break;
      case TerminusKind::boundary_hit:
        std::cout << "boundary_hit(y=" << (l.terminus.index > 0 ? "+1" : "-1")
                  << ")";
        break;
      case TerminusKind::escaped:
        std::cout << "escaped";
        break;
      case TerminusKind::arc_budget:
        std::cout << "arc_budget";
        break;
    }
    std::cout << "  len=" << l.arc_length << "\n";
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    rep::ResultBundle b;
    b.graphs.push_back({ModelParams{n, 1.0, 1.0, 1.0}, g});
    rep::write_file(out_dir + "/stokes.svg", rep::fig2a(b));
  }
  return kExitOk;
}

int cmd_linear_exact(double g, double L, double hbar, int count) {
  ModelParams p{0, g, L, hbar};
  auto exact = linear_exact_spectrum(p, count);
  ScalingBranch br = scaling_graph_n0();
  std::vector<EigenvalueRecord> recs;
  for (auto& ev : exact) {
    EigenvalueRecord r;
    r.L = L;
    r.E = ev.E;
    r.E_mapped = p.map_energy(ev.E);
    r.residual = ev.residual;
    r.regime = rep::detail::classify_exact(ev.E, p, br.e_c);
    recs.push_back(r);
  }
  shooting_detail::sort_and_index(recs);
  std::vector<rep::SpectrumEntry> entries;
  for (auto& r : recs) entries.push_back({p, r});
  std::cout << rep::spectra_csv(entries);
  return kExitOk;
}

int cmd_figures(const std::string& bundle_path, const std::string& which,
                const std::string& out_dir) {
  rep::ResultBundle bundle = rep::bundle_from_json(load_json(bundle_path));
  std::vector<std::string> names;
  std::stringstream ss(which);
  std::string tok;
  while (std::getline(ss, tok, ',')) names.push_back(tok);
  auto files = rep::emit_figures(bundle, names);
  fs::create_directories(out_dir);
  for (auto& [name, bytes] : files) {
    rep::write_file(out_dir + "/" + name, bytes);
    std::cout << out_dir << "/" << name << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra and Stokes graphs of H = p^2 - g (ix)^(2n+1) on "
               "[-L, L]"};
  app.require_subcommand(1);

  std::string config_path, bundle_path, out_dir, n_range = "1",
                                                 emapped_str = "1.0",
                                                 which = "fig3a";
  int n = 1, count = 20;
  double g = 1.0, L = 1.0, hbar = 1.0, tol = 1e-10;

  auto* c_run = app.add_subcommand("run", "execute a batch config");
  c_run->add_option("config", config_path, "JSON config")->required();

  auto* c_val = app.add_subcommand("validate", "check a batch config");
  c_val->add_option("config", config_path, "JSON config")->required();

  auto* c_spec = app.add_subcommand("spectrum", "eigenvalues for one model");
  c_spec->add_option("-n", n, "potential index");
  c_spec->add_option("-g", g, "coupling");
  c_spec->add_option("-L", L, "half-interval length");
  c_spec->add_option("--hbar", hbar, "hbar");
  c_spec->add_option("--count", count, "number of eigenvalues");
  c_spec->add_option("-o,--out", out_dir, "output directory");

  auto* c_scal = app.add_subcommand("scaling-graph",
                                    "integrate scaling branches");
  c_scal->add_option("-n", n_range, "index or range, e.g. 0..5");
  c_scal->add_option("--tol", tol, "ODE tolerance");
  c_scal->add_option("-o,--out", out_dir, "output directory");

  auto* c_stok = app.add_subcommand("stokes", "trace one Stokes graph");
  c_stok->add_option("-n", n, "potential index");
  c_stok->add_option("--emapped", emapped_str, "mapped energy, e.g. 0.3-0.4i")
      ->required();
  c_stok->add_option("-o,--out", out_dir, "output directory");

  auto* c_lin = app.add_subcommand("linear-exact",
                                   "exact n=0 spectrum via Airy determinant");
  c_lin->add_option("-g", g, "coupling");
  c_lin->add_option("-L", L, "half-interval length");
  c_lin->add_option("--hbar", hbar, "hbar");
  c_lin->add_option("--count", count, "number of eigenvalues");

  auto* c_fig = app.add_subcommand("figures", "render figures from a bundle");
  c_fig->add_option("bundle", bundle_path, "bundle.json")->required();
  c_fig->add_option("--which", which, "comma-separated figure names");
  c_fig->add_option("-o,--out", out_dir, "output directory")
      ->default_val("figures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*c_run) return cmd_run(config_path);
    if (*c_val) return cmd_validate(config_path);
    if (*c_spec) return cmd_spectrum(n, g, L, hbar, count, out_dir);
    if (*c_scal) return cmd_scaling_graph(n_range, tol, out_dir);
    if (*c_stok) return cmd_stokes(n, emapped_str, out_dir);
    if (*c_lin) return cmd_linear_exact(g, L, hbar, count);
    if (*c_fig) return cmd_figures(bundle_path, which, out_dir);
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingTaskOutput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
