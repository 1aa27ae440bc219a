#pragma once

// Stokes-graph construction for Q(y) = emapped + i(-1)^n y^{2n+1}: turning
// points, anti-Stokes trajectories (horizontal trajectories of Q dy^2, i.e.
// curves on which the running integral of sqrt(Q) stays real), terminus
// classification, and the boundary residual whose real-emapped root marks
// the break-up configuration where the walls y = +-1 join the graph.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/path.hpp"
#include "ptspectra/rk.hpp"
#include "ptspectra/roots.hpp"

namespace ptspectra {

struct TurningPoint {
  Complex alpha;
  int k = 0;  // index after sorting by argument
};

enum class TerminusKind { turning_point, boundary_hit, escaped, arc_budget };

struct Terminus {
  TerminusKind kind = TerminusKind::escaped;
  int index = 0;  // target turning point k, or +-1 for the boundary points
};

struct StokesLine {
  int origin_tp = 0;
  int direction_index = 0;
  std::vector<Complex> polyline;
  Terminus terminus;
  double arc_length = 0;
};

struct TraceOptions {
  double seed_radius_factor = 1e-4;   // rho_seed = factor * |emapped|^{1/(2n+1)}
  double boundary_hit_radius = 1e-3;  // capture distance for y = +-1
  double escape_radius = 8.0;
  double arc_budget = 50.0;
  double max_step = 0.02;
  double tol = 1e-10;
};

// The 2n+1 roots of y^{2n+1} = i(-1)^n emapped, by Aberth iteration on the
// sparse polynomial, sorted by principal argument.
inline std::vector<TurningPoint> turning_points(Complex emapped, int n) {
  if (std::abs(emapped) < 1e-12)
    throw DegenerateEnergy("turning_points: |emapped| below 1e-12");
  int m = 2 * n + 1;
  std::vector<Complex> coeffs(size_t(m) + 1, Complex(0, 0));
  coeffs[0] = -Complex(0, 1) * ((n % 2 == 0) ? 1.0 : -1.0) * emapped;
  coeffs[size_t(m)] = Complex(1, 0);
  auto roots = poly_roots(coeffs);
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
  std::vector<TurningPoint> out;
  out.reserve(roots.size());
  Qfunction q{emapped, n};
  for (size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(q(roots[i])) > 1e-10 * (1.0 + std::abs(emapped)))
      throw NumericalError("turning_points: root residual too large");
    out.push_back({roots[i], int(i)});
  }
  return out;
}

inline double seed_radius(Complex emapped, int n,
                          const TraceOptions& opt = {}) {
  return opt.seed_radius_factor *
         std::pow(std::abs(emapped), 1.0 / (2 * n + 1));
}

// Local anti-Stokes directions at a simple turning point: Q ~ Q'(a)(y - a),
// and Q dy^2 > 0 forces 3 theta = -arg Q'(a) (mod 2 pi).
inline std::array<double, 3> anti_stokes_directions(const Qfunction& q,
                                                    Complex alpha) {
  double base = -std::arg(q.derivative(alpha)) / 3.0;
  return {base, base + 2.0 * kPi / 3.0, base + 4.0 * kPi / 3.0};
}

// Unit-speed trace of one anti-Stokes trajectory: dy/dsigma = conj(w)/|w|
// with w the branch-continued sqrt(Q) carrying the outward orientation.
inline StokesLine trace_anti_stokes(const TurningPoint& tp,
                                    int direction_index, const Qfunction& q,
                                    const TraceOptions& opt = {}) {
  if (direction_index < 0 || direction_index > 2)
    throw std::invalid_argument("trace_anti_stokes: direction_index in 0..2");
  StokesLine line;
  line.origin_tp = tp.k;
  line.direction_index = direction_index;

  auto tps = q.roots();
  double rho = seed_radius(q.emapped, q.n, opt);
  double theta = anti_stokes_directions(q, tp.alpha)[size_t(direction_index)];
  Complex y0 = tp.alpha + std::polar(rho, theta);
  line.polyline.push_back(tp.alpha);
  line.polyline.push_back(y0);

  // orient the transported sqrt so the motion leaves the turning point
  Complex w0 = std::sqrt(q(y0));
  if ((std::polar(1.0, theta) * w0).real() < 0.0) w0 = -w0;
  Complex w_ref = w0;

  auto classify_hit = [&](Complex a, Complex b, Terminus* t) {
    for (size_t j = 0; j < tps.size(); ++j) {
      if (int(j) == tp.k) continue;
      if (detail::point_segment_distance(tps[j], a, b) < 2.0 * rho) {
        *t = {TerminusKind::turning_point, int(j)};
        return true;
      }
    }
    for (int s : {-1, +1}) {
      if (detail::point_segment_distance(Complex(s, 0), a, b) <
          opt.boundary_hit_radius) {
        *t = {TerminusKind::boundary_hit, s};
        return true;
      }
    }
    return false;
  };

  // the turning point itself may sit on a wall (zero-length connection)
  Terminus t0;
  if (classify_hit(tp.alpha, y0, &t0)) {
    line.terminus = t0;
    return line;
  }

  auto rhs = [&](double, const RkState<1>& y) {
    Complex w = detail::align_sign(std::sqrt(q(y[0])), w_ref);
    return RkState<1>{std::conj(w) / std::abs(w)};
  };
  RkOptions ro;
  ro.rel_tol = ro.abs_tol = opt.tol;
  ro.max_step = opt.max_step;
  ro.initial_step = std::min(opt.max_step, rho);

  Terminus result{TerminusKind::arc_budget, 0};
  try {
    rk_adaptive<1>(
        rhs, 0.0, opt.arc_budget, {y0}, ro,
        [&](const RkStep<1>& st, RkState<1>&) {
          Complex a = st.y0[0], b = st.y1[0];
          w_ref = detail::align_sign(std::sqrt(q(b)), w_ref);
          line.polyline.push_back(b);
          line.arc_length += std::abs(b - a);
          Terminus t;
          if (classify_hit(a, b, &t)) {
            result = t;
            return StepControl::kStop;
          }
          if (std::abs(b) > opt.escape_radius) {
            result = {TerminusKind::escaped, 0};
            return StepControl::kStop;
          }
          return StepControl::kContinue;
        },
        /*record_steps=*/false);
  } catch (const StepUnderflow&) {
    // stalled; if it happened while grazing a turning point, count it as a
    // capture, otherwise report the stall
    Complex yl = line.polyline.back();
    for (size_t j = 0; j < tps.size(); ++j)
      if (int(j) != tp.k && std::abs(yl - tps[j]) < 4.0 * rho) {
        line.terminus = {TerminusKind::turning_point, int(j)};
        return line;
      }
    throw TracingStalled("anti-Stokes trace stalled away from turning points");
  }
  line.terminus = result;
  return line;
}

struct StokesGraph {
  Complex emapped;
  int n = 0;
  std::vector<TurningPoint> tps;
  std::vector<StokesLine> lines;

  // Scale-invariant topology signature: which turning points are joined by
  // anti-Stokes lines. Free ends (escape, wall hit, budget) all count as
  // open: wall hits depend on |emapped|, not on the graph's shape.
  std::string signature() const {
    std::string sig;
    for (size_t i = 0; i < tps.size(); ++i) {
      std::vector<std::string> ends;
      for (const auto& l : lines)
        if (l.origin_tp == int(i))
          ends.push_back(l.terminus.kind == TerminusKind::turning_point
                             ? "T" + std::to_string(l.terminus.index)
                             : "o");
      std::sort(ends.begin(), ends.end());
      sig += std::to_string(i) + ":[";
      for (size_t e = 0; e < ends.size(); ++e)
        sig += ends[e] + (e + 1 < ends.size() ? "," : "");
      sig += "];";
    }
    return sig;
  }
};

inline StokesGraph build_graph(Complex emapped, int n,
                               const TraceOptions& opt = {}) {
  StokesGraph g;
  g.emapped = emapped;
  g.n = n;
  g.tps = turning_points(emapped, n);
  Qfunction q{emapped, n};
  for (const auto& tp : g.tps)
    for (int d = 0; d < 3; ++d)
      g.lines.push_back(trace_anti_stokes(tp, d, q, opt));
  return g;
}

// Conjugate-symmetric pair of turning points closest to the real axis in the
// half-plane fixed by the parity of n (upper for even, lower for odd). For
// n = 0 the single turning point plays both roles.
struct TurningPair {
  Complex left;   // Re <= 0 member
  Complex right;  // mirror -conj(left)
};

inline TurningPair relevant_turning_pair(double emapped_real, int n) {
  if (!(emapped_real > 0))
    throw TurningPairUnavailable("relevant_turning_pair: emapped must be > 0");
  Qfunction q{Complex(emapped_real, 0), n};
  auto roots = q.roots();
  if (n == 0) return {roots[0], roots[0]};
  double want = (n % 2 == 0) ? 1.0 : -1.0;
  Complex best;
  double best_im = 1e300;
  for (Complex r : roots) {
    if (r.imag() * want <= 0) continue;
    if (std::abs(r.imag()) < best_im && r.real() < -1e-14) {
      best_im = std::abs(r.imag());
      best = r;
    }
  }
  if (best_im == 1e300)
    throw TurningPairUnavailable("no conjugate-symmetric pair found");
  return {best, -std::conj(best)};
}

// Signed Im of the action from the relevant left turning point to y = -1
// along a straight path, with the branch normalized to Re >= 0. Its root
// over real emapped locates the critical value e_c where the walls join the
// Stokes graph.
inline double boundary_on_graph_residual(double emapped_real, int n) {
  TurningPair pair = relevant_turning_pair(emapped_real, n);
  Qfunction q{Complex(emapped_real, 0), n};
  Complex target(-1, 0);
  Complex d = target - pair.left;
  if (std::abs(d) < 4e-6) return 0.0;  // turning point on the wall
  Complex dir = d / std::abs(d);
  Complex start = pair.left + 2e-6 * dir;
  ComplexPath p;
  p.vertices = {start, target};
  p.branch_seed = std::sqrt(q(start));
  Complex act = action_integral(p, q);
  if (act.real() < 0.0) act = -act;
  return act.imag();
}

// Root of the boundary residual over real emapped (the critical mapped
// energy as seen by the Stokes graph). The residual has further sign
// changes at large emapped where the straight probe path winds past other
// turning points; the physical critical value is the first crossing from
// the left, so scan upward and bisect the first bracket.
inline double critical_emapped_from_graph(int n, double lo = 0.02,
                                          double hi = 3.0, int grid = 120) {
  auto f = [n](double e) { return boundary_on_graph_residual(e, n); };
  double e_prev = lo, f_prev = f(lo);
  for (int i = 1; i <= grid; ++i) {
    double e = lo * std::pow(hi / lo, double(i) / grid);
    double fe = f(e);
    if (f_prev == 0.0) return e_prev;
    if (f_prev * fe < 0.0) return brent_root(f, e_prev, e, 1e-12);
    e_prev = e;
    f_prev = fe;
  }
  throw NumericalError("critical_emapped_from_graph: no sign change found");
}

}  // namespace ptspectra
