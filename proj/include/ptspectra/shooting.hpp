#pragma once

// Complex Sturm-Liouville reference solver: bidirectional shooting across
// [-L, L] with Dirichlet walls for H = p^2 - g (i x)^{2n+1}. The potential
// grows like L^{2n+1}, so both halves are integrated from their wall toward
// the matching point x = 0 with amplitude renormalization; for real E the
// right half is obtained exactly from the left one by the PT reflection
// psi_r(x) = -conj(psi_l(-x)), which halves the work and makes the matching
// Wronskian real by construction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/rk.hpp"
#include "ptspectra/roots.hpp"
#include "ptspectra/scaling_graph.hpp"

namespace ptspectra {

enum class Regime { BT, BS, CO, transition };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::BT: return "BT";
    case Regime::BS: return "BS";
    case Regime::CO: return "CO";
    default: return "transition";
  }
}

struct EigenvalueRecord {
  int j = 0;          // index after the ordering rule (Re E, then Im >= 0 first)
  double L = 0;
  Complex E;          // physical units
  Complex E_mapped;   // E / (g L^{2n+1})
  Regime regime = Regime::BT;
  double residual = 0;  // |W| / scale at the eigenvalue
};

inline constexpr double kTolRealClassify = 1e-8;
inline constexpr double kShootTolPerUnit = 1e-11;

namespace shooting_detail {

inline Complex potential(double x, const ModelParams& p) {
  // -g (i x)^{2n+1} = -i g (-1)^n x^{2n+1} for real x
  double xp = x;
  for (int i = 0; i < 2 * p.n; ++i) xp *= x;
  double sgn = (p.n % 2 == 0) ? 1.0 : -1.0;
  return Complex(0, -1.0) * (sgn * p.g * xp);
}

struct HalfShot {
  Complex psi, dpsi;  // renormalized values at x = 0
  double log_factor;  // true value = stored * exp(log_factor)
};

// integrate (psi, psi') from x = x_from (wall, psi=0, psi'=1) to x = 0
inline HalfShot integrate_half(Complex E, const ModelParams& p, double x_from,
                               double tol_per_unit) {
  auto rhs = [&](double x, const RkState<2>& y) {
    return RkState<2>{y[1], (potential(x, p) - E) * y[0] / (p.hbar * p.hbar)};
  };
  RkOptions opt;
  opt.rel_tol = tol_per_unit;
  opt.abs_tol = 1e-300;  // state is kept O(1) by renormalization
  opt.max_step = std::abs(x_from) / 8.0;
  double logf = 0.0;
  auto traj = rk_adaptive<2>(
      rhs, x_from, 0.0, {Complex(0, 0), Complex(1, 0)}, opt,
      [&](const RkStep<2>&, RkState<2>& y) {
        double m = std::max(std::abs(y[0]), std::abs(y[1]));
        if (m > 1e100) {
          y[0] /= m;
          y[1] /= m;
          logf += std::log(m);
        }
        return StepControl::kContinue;
      },
      /*record_steps=*/false);
  return {traj.y_end[0], traj.y_end[1], logf};
}

}  // namespace shooting_detail

struct ShootResult {
  Complex value;   // renormalized matching Wronskian at x = 0
  double scale;    // magnitude of the products entering the Wronskian
};

inline ShootResult shoot_residual_scaled(Complex E, const ModelParams& p,
                                         double tol_per_unit = kShootTolPerUnit) {
  if (!std::isfinite(E.real()) || !std::isfinite(E.imag()))
    throw std::invalid_argument("shoot_residual: E must be finite");
  using namespace shooting_detail;
  p.validate();
  // characteristic wavenumber balances psi against psi' in the scale, so it
  // cannot vanish at symmetric modes where psi'(0) = 0 exactly
  double k_char = std::sqrt((std::abs(E) + p.potential_scale())) / p.hbar +
                  1.0 / p.L;
  auto wronskian_scale = [&](Complex pl, Complex dl, Complex pr, Complex dr) {
    return std::abs(pl * dr) + std::abs(pr * dl) +
           k_char * std::abs(pl * pr) + std::abs(dl * dr) / k_char + 1e-300;
  };
  try {
    if (E.imag() == 0.0) {
      // PT reflection supplies the right half exactly
      HalfShot l = integrate_half(E, p, -p.L, tol_per_unit);
      double w = 2.0 * (l.psi * std::conj(l.dpsi)).real();
      Complex pr = -std::conj(l.psi), dr = std::conj(l.dpsi);
      return {Complex(w, 0), wronskian_scale(l.psi, l.dpsi, pr, dr)};
    }
    HalfShot l = integrate_half(E, p, -p.L, tol_per_unit);
    HalfShot r = integrate_half(E, p, +p.L, tol_per_unit);
    // common factor exp(logf_l + logf_r) dropped: zero set unchanged
    Complex w = l.psi * r.dpsi - r.psi * l.dpsi;
    return {w, wronskian_scale(l.psi, l.dpsi, r.psi, r.dpsi)};
  } catch (const NumericalError& e) {
    throw IntegrationFailure(std::string("shoot_residual: ") + e.what());
  }
}

inline Complex shoot_residual(Complex E, const ModelParams& p) {
  return shoot_residual_scaled(E, p).value;
}

struct SpectrumResult {
  std::vector<EigenvalueRecord> records;
  bool complete = true;      // false = IncompleteSpectrum condition
  std::string diagnostics;
};

namespace shooting_detail {

inline Regime classify(Complex E, const ModelParams& p, double e_c) {
  Complex em = p.map_energy(E);
  if (std::abs(E.imag()) > kTolRealClassify * std::abs(E)) return Regime::CO;
  if (std::abs(em.real() - e_c) <= 0.1 * e_c) return Regime::transition;
  return em.real() > e_c ? Regime::BT : Regime::BS;
}

inline void sort_and_index(std::vector<EigenvalueRecord>& recs) {
  std::sort(recs.begin(), recs.end(),
            [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
              if (a.E.real() != b.E.real()) return a.E.real() < b.E.real();
              return a.E.imag() > b.E.imag();  // Im >= 0 first
            });
  for (size_t i = 0; i < recs.size(); ++i) recs[i].j = int(i) + 1;
}

}  // namespace shooting_detail

// The `count` eigenvalues of smallest |E|: real ones from sign changes of the
// (real by PT symmetry) matching residual, complex ones by secant from
// scaling-graph seeds, conjugate partners completed by symmetry.
inline SpectrumResult find_spectrum(const ModelParams& p, int count,
                                    const ScalingBranch* branch_hint = nullptr) {
  if (count < 1 || count > 60)
    throw std::invalid_argument("find_spectrum: count must be in [1, 60]");
  p.validate();
  ScalingBranch branch_local;
  const ScalingBranch* branch = branch_hint;
  if (!branch) {
    branch_local = integrate_branch(p.n, 1e-10);
    branch = &branch_local;
  }

  SpectrumResult out;
  std::vector<EigenvalueRecord> found;
  auto add = [&](Complex E, double resid) {
    if (std::abs(E.imag()) <= kTolRealClassify * std::abs(E))
      E = Complex(E.real(), 0.0);
    for (auto& r : found)
      if (std::abs(r.E - E) <= 1e-7 * (std::abs(E) + 1.0)) return false;
    EigenvalueRecord rec;
    rec.L = p.L;
    rec.E = E;
    rec.E_mapped = p.map_energy(E);
    rec.residual = resid;
    rec.regime = shooting_detail::classify(E, p, branch->e_c);
    found.push_back(rec);
    return true;
  };

  auto fnorm = [&](Complex E) {
    ShootResult s = shoot_residual_scaled(E, p);
    return s.value / s.scale;
  };
  // a complex candidate is genuine only if the real axis next to it is not
  // itself a root (guards against phantom pairs in regions where the
  // residual is exponentially flat and the secant stalls off-axis)
  auto genuinely_complex = [&](Complex root, double f_at_root) {
    if (std::abs(root.imag()) <= kTolRealClassify * std::abs(root))
      return false;
    double fr = std::abs(fnorm(Complex(root.real(), 0.0)));
    return fr > 20.0 * std::max(f_at_root, 1e-13);
  };

  // complex pairs predicted by the scaling graph
  double pot = p.potential_scale();
  for (int j = 1; j <= 4 * count; ++j) {
    double tau = mode_tau(j, p);
    if (tau >= 1.1 * branch->tau_c) break;
    Complex seed = branch->eval(std::min(tau, branch->tau_c)) * pot;
    if (tau >= 0.98 * branch->tau_c)
      seed += Complex(0, (p.n % 2 == 0 ? 1.0 : -1.0) * 0.02 * pot);
    auto res = find_root_complex(fnorm, seed, 1e-9, 60);
    if (!res.converged) continue;
    Complex root = res.root;
    if (!genuinely_complex(root, std::abs(res.residual))) continue;
    if (root.imag() < 0) root = std::conj(root);
    Complex rootc = std::conj(root);
    add(root, std::abs(fnorm(root)));
    add(rootc, std::abs(fnorm(rootc)));
  }

  // real-axis scan over an expanding window
  double u_hi =
      std::sqrt(p.box_level(std::max(2, count))) * 1.2;
  for (int expand = 0; expand < 8; ++expand) {
    found.erase(std::remove_if(found.begin(), found.end(),
                               [](const EigenvalueRecord& r) {
                                 return r.E.imag() == 0.0;
                               }),
                found.end());
    int boxes =
        std::max(3, int(u_hi * 2.0 * p.L / (kPi * p.hbar)) + 1);
    int grid = 40 * boxes;
    double prev_u = u_hi * 1e-4;
    double prev_f = fnorm(Complex(prev_u * prev_u, 0)).real();
    double prev_mag = std::abs(prev_f), pp_mag = prev_mag + 1.0;
    double pp_u = prev_u;
    for (int i = 1; i <= grid; ++i) {
      double u = u_hi * (1e-4 + (1.0 - 1e-4) * double(i) / grid);
      double E = u * u;
      double f = fnorm(Complex(E, 0)).real();
      if (prev_f * f < 0.0) {
        double root = brent_root(
            [&](double x) { return fnorm(Complex(x, 0)).real(); },
            prev_u * prev_u, E);
        add(Complex(root, 0), std::abs(fnorm(Complex(root, 0))));
      } else if (i >= 2 && prev_mag < 0.1 * std::min(std::abs(f), pp_mag)) {
        // sharp dip without a sign change: a merged pair may hide just off
        // the axis; park complex seeds beside the minimum
        double spacing = (E - pp_u * pp_u);
        for (double sgn : {1.0, -1.0}) {
          Complex seed(prev_u * prev_u, sgn * 0.25 * spacing);
          auto res = find_root_complex(fnorm, seed, 1e-9, 60);
          if (res.converged &&
              genuinely_complex(res.root, std::abs(res.residual)))
            add(res.root, std::abs(fnorm(res.root)));
        }
      }
      pp_u = prev_u;
      prev_u = u;
      prev_f = f;
      pp_mag = prev_mag;
      prev_mag = std::abs(f);
    }
    std::sort(found.begin(), found.end(),
              [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
                return std::abs(a.E) < std::abs(b.E);
              });
    if (int(found.size()) >= count &&
        std::abs(found[size_t(count - 1)].E) < 0.8 * u_hi * u_hi)
      break;
    u_hi *= 1.5;
  }

  if (int(found.size()) < count) {
    out.complete = false;
    out.diagnostics = "IncompleteSpectrum: found " +
                      std::to_string(found.size()) + " of " +
                      std::to_string(count);
  } else {
    found.resize(size_t(count));
  }
  shooting_detail::sort_and_index(found);
  out.records = std::move(found);
  return out;
}

// L-continuation of the spectrum with branch identity bookkeeping.
struct BranchTable {
  std::vector<double> L_grid;
  std::vector<std::vector<EigenvalueRecord>> per_L;
  // branch_of[k][i]: branch id of record i at L_grid[k]
  std::vector<std::vector<int>> branch_of;
  int branch_count = 0;
  std::vector<std::string> events;
  bool branch_swap_suspected = false;
};

inline BranchTable track_branches(const ModelParams& base,
                                  const std::vector<double>& L_grid,
                                  int count) {
  if (L_grid.size() < 2 ||
      !std::is_sorted(L_grid.begin(), L_grid.end()) ||
      std::adjacent_find(L_grid.begin(), L_grid.end()) != L_grid.end())
    throw std::invalid_argument(
        "track_branches: L grid must be strictly increasing, >= 2 points");
  ScalingBranch branch = integrate_branch(base.n, 1e-10);
  BranchTable table;
  table.L_grid = L_grid;
  for (double L : L_grid) {
    ModelParams p = base;
    p.L = L;
    table.per_L.push_back(find_spectrum(p, count, &branch).records);
  }
  // assign branch ids by nearest-neighbor continuation in the mapped plane
  table.branch_of.resize(table.per_L.size());
  auto& first = table.per_L.front();
  table.branch_of[0].resize(first.size());
  for (size_t i = 0; i < first.size(); ++i)
    table.branch_of[0][i] = table.branch_count++;
  for (size_t k = 1; k < table.per_L.size(); ++k) {
    auto& prev = table.per_L[k - 1];
    auto& cur = table.per_L[k];
    table.branch_of[k].assign(cur.size(), -1);
    std::vector<bool> taken(prev.size(), false);
    for (size_t i = 0; i < cur.size(); ++i) {
      double best = 1e300, second = 1e300;
      size_t bi = 0;
      for (size_t j = 0; j < prev.size(); ++j) {
        if (taken[j]) continue;
        double d = std::abs(cur[i].E_mapped - prev[j].E_mapped);
        if (d < best) {
          second = best;
          best = d;
          bi = j;
        } else {
          second = std::min(second, d);
        }
      }
      if (best == 1e300) {
        table.branch_of[k][i] = table.branch_count++;
        continue;
      }
      if (second < 2.0 * best && best > 1e-12)
        table.branch_swap_suspected = true;
      taken[bi] = true;
      table.branch_of[k][i] = table.branch_of[k - 1][bi];
      bool was_real = prev[bi].E.imag() == 0.0;
      bool is_real = cur[i].E.imag() == 0.0;
      if (was_real != is_real)
        table.events.push_back(
            "regime transition on branch " +
            std::to_string(table.branch_of[k][i]) + " between L=" +
            std::to_string(L_grid[k - 1]) + " and L=" +
            std::to_string(L_grid[k]));
    }
    for (size_t i = 0; i < cur.size(); ++i)
      if (table.branch_of[k][i] < 0)
        table.branch_of[k][i] = table.branch_count++;
  }
  return table;
}

struct Eigenfunction {
  std::vector<double> grid;
  std::vector<Complex> psi;
  Complex E;
  double kappa_proj = 1.0;
  double richardson_gap = 0.0;  // |kappa(N) - kappa(N/2)| consistency check
};

// Normalized eigenfunction on a uniform grid and the projector norm
// kappa = int |psi|^2 / |int psi^2| (both by composite Simpson).
inline Eigenfunction eigenfunction_and_kappa(Complex E, const ModelParams& p,
                                             int grid_points = 4001) {
  using namespace shooting_detail;
  if (grid_points < 2001) grid_points = 2001;
  if (grid_points % 2 == 0) ++grid_points;

  auto rhs = [&](double x, const RkState<2>& y) {
    return RkState<2>{y[1], (potential(x, p) - E) * y[0] / (p.hbar * p.hbar)};
  };

  // integrate each half on a dense trajectory with log bookkeeping
  struct Half {
    RkTrajectory<2> traj;
    std::vector<std::pair<double, double>> logf_at;  // (t, accumulated log)
  };
  auto run = [&](double from) {
    Half h;
    double logf = 0;
    RkOptions opt;
    opt.rel_tol = kShootTolPerUnit;
    opt.abs_tol = 1e-300;
    opt.max_step = p.L / 16.0;
    h.logf_at.push_back({from, 0.0});
    h.traj = rk_adaptive<2>(
        rhs, from, 0.0, {Complex(0, 0), Complex(1, 0)}, opt,
        [&](const RkStep<2>& st, RkState<2>& y) {
          double m = std::max(std::abs(y[0]), std::abs(y[1]));
          if (m > 1e50) {
            y[0] /= m;
            y[1] /= m;
            logf += std::log(m);
            h.logf_at.push_back({st.t1, logf});
          }
          return StepControl::kContinue;
        });
    h.logf_at.push_back({0.0, logf});
    return h;
  };
  Half left = run(-p.L);
  Half right = run(+p.L);

  auto eval_half = [&](const Half& h, double from, double x) -> Complex {
    // the stored trajectory is piecewise renormalized; rescale every point
    // to the amplitude convention of the matching end x = 0 (the factor
    // logf(x) - logf_total is <= 0, so this only ever shrinks)
    Complex v = h.traj.eval(x)[0];
    double logf_total = h.logf_at.back().second;
    double logf_here = 0.0;
    double dir = (from < 0) ? 1.0 : -1.0;  // direction of travel toward 0
    for (auto& [t, lf] : h.logf_at) {
      if (dir * t > dir * x) break;  // renormalization not yet reached at x
      logf_here = lf;
    }
    return v * std::exp(logf_here - logf_total);
  };

  // match amplitudes at x = 0: psi_left(0) * c = psi_right(0)
  Complex l0 = left.traj.y_end[0], l1 = left.traj.y_end[1];
  Complex r0 = right.traj.y_end[0], r1 = right.traj.y_end[1];
  Complex c = (std::abs(r0) > std::abs(r1)) ? l0 / r0 : l1 / r1;

  Eigenfunction ef;
  ef.E = E;
  ef.grid.resize(size_t(grid_points));
  ef.psi.resize(size_t(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    double x = -p.L + 2.0 * p.L * double(i) / double(grid_points - 1);
    ef.grid[size_t(i)] = x;
    ef.psi[size_t(i)] = (x <= 0.0) ? eval_half(left, -p.L, x)
                                   : c * eval_half(right, +p.L, x);
  }

  auto simpson = [&](auto f) {
    Complex acc = f(0) + f(grid_points - 1);
    for (int i = 1; i < grid_points - 1; i += 2) acc += 4.0 * f(i);
    for (int i = 2; i < grid_points - 1; i += 2) acc += 2.0 * f(i);
    double h = 2.0 * p.L / double(grid_points - 1);
    return acc * (h / 3.0);
  };
  auto kappa_of = [&](int stride) {
    // Simpson on the strided grid for the Richardson consistency check
    int m = (grid_points - 1) / stride + 1;
    Complex n2 = 0, pt2 = 0;
    double h = 2.0 * p.L * stride / double(grid_points - 1);
    for (int i = 0; i < m; ++i) {
      Complex v = ef.psi[size_t(i * stride)];
      double w = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      n2 += w * std::norm(v);
      pt2 += w * v * v;
    }
    n2 *= h / 3.0;
    pt2 *= h / 3.0;
    return std::abs(n2) / std::max(std::abs(pt2), 1e-300);
  };

  Complex norm2 = simpson([&](int i) -> Complex {
    return std::norm(ef.psi[size_t(i)]);
  });
  if (norm2.real() < 1e-300)
    throw NormalizationDegenerate("eigenfunction norm underflow");
  double scale = 1.0 / std::sqrt(norm2.real());
  for (auto& v : ef.psi) v *= scale;

  Complex pt_sq = simpson([&](int i) -> Complex {
    return ef.psi[size_t(i)] * ef.psi[size_t(i)];
  });
  ef.kappa_proj = 1.0 / std::max(std::abs(pt_sq), 1e-300);
  ef.richardson_gap = std::abs(kappa_of(1) - kappa_of(2));
  return ef;
}

}  // namespace ptspectra
