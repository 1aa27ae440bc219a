#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"

namespace ptspectra {

struct RkOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1e306;     // cap on |h|
  double initial_step = 0.0;   // 0 = automatic
  std::uint64_t max_steps = 20'000'000;
};

template <int N>
using RkState = std::array<Complex, N>;

// One accepted step; y(t) inside is recovered by cubic Hermite interpolation
// from (y0, f0, y1, f1), which is 4th-order accurate.
template <int N>
struct RkStep {
  double t0 = 0, t1 = 0;
  RkState<N> y0{}, y1{}, f0{}, f1{};

  RkState<N> eval(double t) const {
    double h = t1 - t0;
    double s = (t - t0) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    RkState<N> y;
    for (int i = 0; i < N; ++i)
      y[size_t(i)] = h00 * y0[size_t(i)] + (h10 * h) * f0[size_t(i)] +
                     h01 * y1[size_t(i)] + (h11 * h) * f1[size_t(i)];
    return y;
  }
};

enum class StepControl { kContinue, kStop };

template <int N>
struct RkTrajectory {
  std::vector<RkStep<N>> steps;
  RkState<N> y_end{};
  double t_end = 0;
  bool stopped_early = false;

  RkState<N> eval(double t) const {
    if (steps.empty()) return y_end;
    double dir = steps.back().t1 > steps.front().t0 ? 1.0 : -1.0;
    size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (dir * steps[mid].t1 < dir * t)
        lo = mid + 1;
      else
        hi = mid;
    }
    return steps[lo].eval(t);
  }
};

namespace detail {

template <int N>
inline bool finite(const RkState<N>& y) {
  for (auto& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace detail

// Embedded Dormand-Prince 5(4) pair over a complex state vector. The
// observer runs after every accepted step and may rescale the state in
// place (amplitude renormalization) or stop the integration.
template <int N, class RHS, class Observer>
RkTrajectory<N> rk_adaptive(RHS&& rhs, double t0, double t1, RkState<N> y0,
                            const RkOptions& opt, Observer&& observer,
                            bool record_steps = true) {
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a2[] = {1.0 / 5};
  static const double a3[] = {3.0 / 40, 9.0 / 40};
  static const double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
  static const double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                              -212.0 / 729};
  static const double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                              49.0 / 176, -5103.0 / 18656};
  static const double b5[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                              -2187.0 / 6784, 11.0 / 84, 0.0};
  static const double b4[] = {5179.0 / 57600,    0.0,        7571.0 / 16695,
                              393.0 / 640,       -92097.0 / 339200,
                              187.0 / 2100,      1.0 / 40};
  static const double* const as[5] = {a2, a3, a4, a5, a6};

  const double span = std::abs(t1 - t0);
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  if (span == 0.0) return {{}, y0, t0, false};

  RkTrajectory<N> traj;
  double t = t0;
  RkState<N> y = y0;
  RkState<N> f0 = rhs(t, y);
  if (!detail::finite<N>(f0)) throw RhsSingular("rk_adaptive: rhs not finite");

  double h;
  if (opt.initial_step > 0.0) {
    h = std::min(opt.initial_step, span);
  } else {
    double fn = 0, yn = 0;
    for (int i = 0; i < N; ++i) {
      fn = std::max(fn, std::abs(f0[size_t(i)]));
      yn = std::max(yn, std::abs(y[size_t(i)]));
    }
    h = std::min({span, opt.max_step,
                  (fn > 0) ? 0.01 * (yn + opt.abs_tol / opt.rel_tol) / fn
                           : 0.01 * span});
    h = std::max(h, span * 1e-10);
  }

  std::array<RkState<N>, 7> k;
  for (std::uint64_t nstep = 0; nstep < opt.max_steps; ++nstep) {
    if (dir * (t1 - t) <= 0.0) break;
    h = std::min({h, opt.max_step, std::abs(t1 - t)});
    if (h < 1e-14 * span)
      throw StepUnderflow("rk_adaptive: step size underflow");

    k[0] = f0;
    RkState<N> ys;
    for (int s = 1; s < 6; ++s) {
      for (int i = 0; i < N; ++i) {
        Complex acc = 0;
        for (int j = 0; j < s; ++j) acc += as[s - 1][j] * k[size_t(j)][size_t(i)];
        ys[size_t(i)] = y[size_t(i)] + (dir * h) * acc;
      }
      k[size_t(s)] = rhs(t + dir * h * c[s], ys);
      if (!detail::finite<N>(k[size_t(s)]))
        throw RhsSingular("rk_adaptive: rhs not finite");
    }
    RkState<N> y5;
    for (int i = 0; i < N; ++i) {
      Complex acc = 0;
      for (int j = 0; j < 6; ++j) acc += b5[j] * k[size_t(j)][size_t(i)];
      y5[size_t(i)] = y[size_t(i)] + (dir * h) * acc;
    }
    k[6] = rhs(t + dir * h, y5);
    if (!detail::finite<N>(k[6]))
      throw RhsSingular("rk_adaptive: rhs not finite");

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      Complex acc = 0;
      for (int j = 0; j < 7; ++j)
        acc += (b5[j] - b4[j]) * k[size_t(j)][size_t(i)];
      double sc = opt.abs_tol +
                  opt.rel_tol * std::max(std::abs(y[size_t(i)]),
                                          std::abs(y5[size_t(i)]));
      err = std::max(err, std::abs(h * acc) / sc);
    }

    if (err <= 1.0) {
      RkStep<N> st;
      st.t0 = t;
      st.t1 = t + dir * h;
      st.y0 = y;
      st.y1 = y5;
      st.f0 = f0;
      st.f1 = k[6];
      t = st.t1;
      y = y5;
      f0 = k[6];
      RkState<N> before = y;
      StepControl ctl = observer(st, y);
      if (y != before) f0 = rhs(t, y);  // state was rescaled
      if (record_steps) traj.steps.push_back(st);
      if (ctl == StepControl::kStop) {
        traj.stopped_early = true;
        break;
      }
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::min(5.0, std::max(0.2, fac));
  }
  traj.y_end = y;
  traj.t_end = t;
  return traj;
}

template <int N, class RHS>
RkTrajectory<N> rk_adaptive(RHS&& rhs, double t0, double t1, RkState<N> y0,
                            const RkOptions& opt = {}) {
  return rk_adaptive<N>(std::forward<RHS>(rhs), t0, t1, y0, opt,
                        [](const RkStep<N>&, RkState<N>&) {
                          return StepControl::kContinue;
                        });
}

}  // namespace ptspectra
