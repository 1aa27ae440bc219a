#pragma once

// The asymptotic spectral scaling graph R = R_CO u R+: one complex branch
// emapped(tau) per potential index n, obtained by integrating the reality
// constraint in differential form from a Puiseux seed next to the singular
// endpoint (-1)^n i, plus the mode-spacing map that places individual
// eigenvalues on the branch.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/path.hpp"
#include "ptspectra/rk.hpp"
#include "ptspectra/roots.hpp"

namespace ptspectra {

struct ScalingBranch {
  int n = 0;
  struct Sample {
    double tau;
    Complex emapped;
    Complex slope;  // d emapped / d tau, for Hermite interpolation
  };
  std::vector<Sample> samples;  // tau ascending, from delta_tau to tau_c
  double tau_c = 0;
  double e_c = 0;  // real endpoint emapped(tau_c)
  bool im_monotone = true;  // |Im emapped| decreased monotonically

  // cubic Hermite evaluation on the stored samples
  Complex eval(double tau) const {
    if (samples.empty()) throw std::logic_error("empty ScalingBranch");
    if (tau <= samples.front().tau) return samples.front().emapped;
    if (tau >= samples.back().tau) return samples.back().emapped;
    size_t hi = size_t(std::lower_bound(samples.begin(), samples.end(), tau,
                                        [](const Sample& s, double t) {
                                          return s.tau < t;
                                        }) -
                       samples.begin());
    const Sample& a = samples[hi - 1];
    const Sample& b = samples[hi];
    double h = b.tau - a.tau, s = (tau - a.tau) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.emapped + ((s3 - 2 * s2 + s) * h) * a.slope +
           (-2 * s3 + 3 * s2) * b.emapped + ((s3 - s2) * h) * b.slope;
  }
};

inline constexpr double kPuiseuxDeltaTau = 1e-6;

// Initial branch point: (-1)^n i + [3(2n+1) dt/2]^{2/3} exp[-(-1)^n i 7 pi/3].
inline Complex puiseux_seed(int n, double delta_tau) {
  if (!(delta_tau > 0.0 && delta_tau <= 1e-3))
    throw std::invalid_argument("puiseux_seed: need 0 < delta_tau <= 1e-3");
  double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  double amp = std::pow(1.5 * (2 * n + 1) * delta_tau, 2.0 / 3.0);
  // exp[-(-1)^n i 7 pi/3] = exp[-(-1)^n i pi/3]
  Complex dir = std::polar(1.0, -sgn * kPi / 3.0);
  return Complex(0, sgn) + amp * dir;
}

namespace scaling_detail {

// sqrt(emapped - (-1)^n i) on the branch sheet: the Puiseux phase
// -(-1)^n 7 pi/6 continues to the negated principal square root for the
// whole branch (the offset emapped - (-1)^n i never crosses the negative
// real axis before tau_c).
inline Complex branch_sqrt(Complex emapped, int n) {
  double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  return -std::sqrt(emapped - Complex(0, sgn));
}

}  // namespace scaling_detail

// Right-hand side of the branch ODE:
// d emapped/d tau = (2n+1) emapped / ((2n+3) tau / 2 + sqrt(emapped - (-1)^n i))
inline Complex ode_rhs(double tau, Complex emapped, int n) {
  Complex den = 0.5 * (2 * n + 3) * tau + scaling_detail::branch_sqrt(emapped, n);
  if (std::abs(den) < 1e-12)
    throw SingularDenominator("ode_rhs: denominator vanishes (tau = 0 seed?)");
  return double(2 * n + 1) * emapped / den;
}

// Integrate the branch from the Puiseux seed until Im emapped crosses zero;
// locate tau_c by bracketed re-integration and return >= 400 samples.
inline ScalingBranch integrate_branch(int n, double tol = 1e-10) {
  if (n < 0 || n > 15)
    throw std::invalid_argument("integrate_branch: n must be in [0, 15]");
  const double dt = kPuiseuxDeltaTau;
  const Complex seed = puiseux_seed(n, dt);
  const double im0 = (n % 2 == 0) ? 1.0 : -1.0;

  auto rhs = [n](double tau, const RkState<1>& y) {
    return RkState<1>{ode_rhs(tau, y[0], n)};
  };

  RkOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  opt.initial_step = dt;

  auto crossed = [&](Complex e) { return e.imag() * im0 <= 0.0; };
  auto traj = rk_adaptive<1>(
      rhs, dt, 100.0, {seed}, opt,
      [&](const RkStep<1>& st, RkState<1>&) {
        return crossed(st.y1[0]) ? StepControl::kStop : StepControl::kContinue;
      });
  if (!traj.stopped_early)
    throw NoRealCrossing("integrate_branch: Im emapped never crossed zero");

  // bracket [t0, t1] of the crossing step; refine by local re-integration
  const RkStep<1>& last = traj.steps.back();
  RkOptions fine = opt;
  fine.rel_tol = fine.abs_tol = std::min(tol, 1e-12);
  auto im_at = [&](double tau) {
    if (tau <= last.t0) return last.y0[0].imag() * im0;
    auto t = rk_adaptive<1>(rhs, last.t0, tau, {last.y0[0]}, fine);
    return t.y_end[0].imag() * im0;
  };
  double tau_c = brent_root(im_at, last.t0, last.t1, 1e-14);
  Complex e_c =
      rk_adaptive<1>(rhs, last.t0, tau_c, {last.y0[0]}, fine).y_end[0];

  ScalingBranch br;
  br.n = n;
  br.tau_c = tau_c;
  br.e_c = e_c.real();

  const int count = 400;
  br.samples.reserve(count + 1);
  double prev_im = std::abs(seed.imag() - im0) + 1.0;
  for (int i = 0; i < count; ++i) {
    double tau = dt + (tau_c - dt) * double(i) / double(count);
    Complex e = traj.eval(tau)[0];
    if (tau <= dt) e = seed;
    Complex slope = (tau > dt) ? ode_rhs(tau, e, n) : ode_rhs(dt, seed, n);
    br.samples.push_back({tau, e, slope});
    double im_dist = std::abs(e.imag());
    if (i > 0 && im_dist > prev_im + 1e-12) br.im_monotone = false;
    prev_im = im_dist;
  }
  br.samples.push_back({tau_c, Complex(e_c.real(), 0.0),
                        ode_rhs(tau_c, Complex(e_c.real(), 0.0), n)});
  return br;
}

// Integral form of the constraint: tau(emapped) as the action from the
// turning point nearest y = -1 to y = -1, which must be real and equal to
// the sample's tau. Returns |Im tau| + |Re tau - sample.tau|.
inline double reality_residual(const ScalingBranch& branch, size_t sample_index) {
  if (sample_index >= branch.samples.size())
    throw std::out_of_range("reality_residual: bad sample index");
  const auto& s = branch.samples[sample_index];
  Qfunction q{s.emapped, branch.n};
  // turning point continuously connected to y = -1 along the branch
  Complex alpha;
  double best = 1e300;
  for (Complex r : q.roots())
    if (std::abs(r - Complex(-1, 0)) < best) {
      best = std::abs(r - Complex(-1, 0));
      alpha = r;
    }
  Complex target(-1, 0);
  if (std::abs(alpha - target) < 4e-6) {
    // the turning point sits (numerically) on the endpoint: zero action
    return std::abs(s.tau);
  }
  Complex dir = (target - alpha) / std::abs(target - alpha);
  Complex start = alpha + 2e-6 * dir;
  ComplexPath p;
  p.vertices = {start, target};
  p.branch_seed = std::sqrt(q(start));
  Complex act = action_integral(p, q);
  if (act.real() < 0.0) act = -act;  // branch with positive running action
  return std::abs(act.imag()) + std::abs(act.real() - s.tau);
}

struct ModeTau {
  double tau = 0;
  bool on_complex_branch = false;  // tau < tau_c
};

// Position of mode j on the branch: tau_j = (4j-1) pi hbar / (4 sqrt(g L^{2n+3})).
inline double mode_tau(int j, const ModelParams& params) {
  if (j < 1) throw std::invalid_argument("mode_tau: j >= 1");
  return 0.25 * (4 * j - 1) * kPi * params.hbar /
         std::sqrt(params.g * std::pow(params.L, 2 * params.n + 3));
}

inline ModeTau mode_tau(int j, const ModelParams& params,
                        const ScalingBranch& branch) {
  double t = mode_tau(j, params);
  return {t, t < branch.tau_c};
}

// Distance from a point to the scaling graph R = branch u conj(branch) u R+,
// together with the nearest tau (0 for points projected onto the real axis).
struct GraphProjection {
  double distance = 0;
  double tau = 0;        // parameter of the nearest branch point (if on branch)
  bool on_real_axis = false;
};

inline GraphProjection project_onto_graph(const ScalingBranch& branch,
                                          Complex emapped) {
  GraphProjection best;
  best.distance = 1e300;
  // fold onto the integrated branch half-plane
  Complex e = emapped;
  double im0 = (branch.n % 2 == 0) ? 1.0 : -1.0;
  if (e.imag() * im0 < 0) e = std::conj(e);
  for (size_t i = 0; i + 1 < branch.samples.size(); ++i) {
    Complex a = branch.samples[i].emapped, b = branch.samples[i + 1].emapped;
    Complex d = b - a;
    double len2 = std::norm(d);
    double t = len2 > 0 ? std::clamp(((e - a).real() * d.real() +
                                      (e - a).imag() * d.imag()) /
                                         len2,
                                     0.0, 1.0)
                        : 0.0;
    double dist = std::abs(e - (a + t * d));
    if (dist < best.distance) {
      best.distance = dist;
      best.tau = branch.samples[i].tau +
                 t * (branch.samples[i + 1].tau - branch.samples[i].tau);
      best.on_real_axis = false;
    }
  }
  if (e.real() > 0 && std::abs(e.imag()) < best.distance) {
    best.distance = std::abs(e.imag());
    best.tau = 0;
    best.on_real_axis = true;
  }
  return best;
}

}  // namespace ptspectra
