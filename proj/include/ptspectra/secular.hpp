#pragma once

// WKB secular machinery for real eigenvalues: the deformed contour through
// the relevant turning-point pair, the actions over its legs, the bounded
// secular residuals, the box-type / Bohr-Sommerfeld level solvers, and the
// break-up and complex quantization conditions.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/path.hpp"
#include "ptspectra/roots.hpp"
#include "ptspectra/stokes.hpp"

namespace ptspectra {

struct SecularData {
  double action_total = 0;  // full-interval action over the deformed contour
  double action_inner = 0;  // between the two relevant turning points
  double action_edge = 0;   // Re part of the wall -> first turning point leg
  double delta = 0;         // (-1)^{n+1} 2 Im(wall->tp action): log amplitude
                            // asymmetry between the two WKB components
  ComplexPath path;         // the contour -1 -> a1 -> a2 -> +1 (detoured)
};

inline SecularData secular_data(double E, const ModelParams& p) {
  p.validate();
  if (!(E > 0)) throw std::invalid_argument("secular_data: E must be > 0");
  double emapped = E / p.potential_scale();
  TurningPair pair = relevant_turning_pair(emapped, p.n);
  Qfunction q{Complex(emapped, 0), p.n};
  // never let the detour drop below the turning-point clearance
  double rho = std::max(seed_radius(Complex(emapped, 0), p.n),
                        4.0 * kTolTurningPoint);

  // corners pulled radially inward by rho: keeps the sqrt singularities off
  // the contour, preserves the PT mirror symmetry of the path, and rounds
  // the turning points on the sheet where the full-interval action tends to
  // the box value 2 sqrt(emapped) (the outward side continues onto the
  // flipped branch and ruins the secular structure)
  Complex a1 = pair.left * (1.0 - rho / std::abs(pair.left));
  Complex a2 = pair.right * (1.0 - rho / std::abs(pair.right));

  // effectively relative tolerance: the integral magnitude grows like
  // sqrt(emapped) * contour length, which is unbounded in the box limit
  double contour = 2.0 + 2.0 * std::abs(pair.left);
  double tol =
      kTolQuadrature * std::max(1.0, std::sqrt(emapped) * contour * 0.5);
  double scale = p.action_scale();

  SecularData out;
  if (p.n == 0) {
    out.path.vertices = {Complex(-1, 0), a1, Complex(1, 0)};
  } else {
    out.path.vertices = {Complex(-1, 0), a1, a2, Complex(1, 0)};
  }
  out.path.branch_seed = std::sqrt(q(Complex(-1, 0)));

  Complex w = out.path.branch_seed;
  std::vector<Complex> legs;
  for (size_t s = 0; s + 1 < out.path.vertices.size(); ++s) {
    ComplexPath leg;
    leg.vertices = {out.path.vertices[s], out.path.vertices[s + 1]};
    leg.branch_seed = w;
    PathAction act = action_integral_full(leg, q, tol);
    legs.push_back(act.value);
    w = act.sqrt_end;
  }
  Complex total = 0;
  for (Complex l : legs) total += l;

  double sgn = (p.n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
  out.action_edge = scale * legs.front().real();
  out.delta = sgn * 2.0 * scale * legs.front().imag();
  out.action_inner = (p.n == 0) ? 0.0 : scale * legs[1].real();
  out.action_total = scale * total.real();
  return out;
}

// Both branches of the bounded secular residual
// e^{-|delta|} (+- sin I_T) + e^{delta - |delta|} cos I_M,
// which shares the zero set of +- sin I_T + e^delta cos I_M while staying
// in [-2, 2] deep in either regime.
inline std::pair<double, double> secular_residuals(double E,
                                                   const ModelParams& p) {
  SecularData d = secular_data(E, p);
  double damp = std::exp(-std::abs(d.delta));
  double amp = std::exp(d.delta - std::abs(d.delta));
  double s = std::sin(d.action_total), c = std::cos(d.action_inner);
  return {damp * s + amp * c, -damp * s + amp * c};
}

namespace secular_detail {

template <class F>
std::vector<double> solve_monotone_levels(F&& action, const ModelParams& p,
                                          int j_max, double offset) {
  std::vector<double> out;
  double lo = 1e-8;
  double a_lo = action(lo);
  for (int j = 1; j <= j_max; ++j) {
    double target = (j + offset) * kPi;
    if (a_lo > target)
      throw NotMonotone("secular level solver: lower bracket above target");
    double hi = std::max(2.0 * lo, 1.0);
    int guard = 0;
    while (action(hi) < target) {
      hi *= 2.0;
      if (++guard > 60)
        throw NotMonotone("secular level solver: no upper bracket");
    }
    double emapped =
        brent_root([&](double e) { return action(e) - target; }, lo, hi);
    out.push_back(emapped * p.potential_scale());
  }
  return out;
}

}  // namespace secular_detail

// Box-type levels: action_total(E) = j pi.
inline std::vector<double> bt_levels(const ModelParams& p, int j_max) {
  auto action = [&](double emapped) {
    return secular_data(emapped * p.potential_scale(), p).action_total;
  };
  return secular_detail::solve_monotone_levels(action, p, j_max, 0.0);
}

// Bohr-Sommerfeld levels: action_inner(E) = (N + 1/2) pi with N = j - 1, so
// that the j-th returned level lines up with the j-th low-lying mode of the
// shooting solver (the lowest mode carries inner action pi/2).
inline std::vector<double> bs_levels(const ModelParams& p, int j_max) {
  if (p.n == 0)
    throw NotMonotone("bs_levels: the inner action vanishes for n = 0");
  auto action = [&](double emapped) {
    return secular_data(emapped * p.potential_scale(), p).action_inner;
  };
  return secular_detail::solve_monotone_levels(action, p, j_max, -0.5);
}

// Distances of action_edge + pi/4 and (action_edge + action_inner) + pi/4
// to the nearest integer multiple of pi.
inline std::pair<double, double> breakup_residuals(double E,
                                                   const ModelParams& p) {
  SecularData d = secular_data(E, p);
  auto dist = [](double x) {
    double r = std::remainder(x, kPi);
    return std::abs(r);
  };
  return {dist(d.action_edge + kPi / 4.0),
          dist(d.action_edge + d.action_inner + kPi / 4.0)};
}

// The quantization phase of the connection-segment action; the pi/4 Maslov
// shift is a fixed constant of the uniform turning-point approximation.
inline double complex_quantization_phase(double action) {
  return std::sin(action + kPi / 4.0);
}

// Action over the anti-Stokes segment from the relevant turning point to
// the wall carrying the exact Dirichlet zero, branch normalized to
// Re >= 0, in physical phase units. Members of the primary branch (the one
// seeded at (-1)^n i) connect to y = -1; their conjugate partners are the
// PT-reflected configuration and connect to y = +1.
inline Complex connection_action(Complex E, const ModelParams& p) {
  Complex emapped = E / p.potential_scale();
  double primary = (p.n % 2 == 0) ? 1.0 : -1.0;
  Complex wall = (emapped.imag() * primary >= 0.0) ? Complex(-1, 0)
                                                   : Complex(1, 0);
  Qfunction q{emapped, p.n};
  Complex alpha;
  double best = 1e300;
  for (Complex r : q.roots())
    if (std::abs(r - wall) < best) {
      best = std::abs(r - wall);
      alpha = r;
    }
  if (std::abs(alpha - wall) < 4e-6) return Complex(0, 0);
  Complex dir = (wall - alpha) / std::abs(wall - alpha);
  Complex start = alpha + 2e-6 * dir;
  ComplexPath path;
  path.vertices = {start, wall};
  path.branch_seed = std::sqrt(q(start));
  Complex act = action_integral(path, q);
  if (act.real() < 0.0) act = -act;
  return act * p.action_scale();
}

// |sin(Re action + pi/4)| + |Im action|: vanishes exactly where the
// connection segment is horizontal (real action) and quantized.
inline double complex_quantization_residual(Complex E, const ModelParams& p) {
  constexpr double kImPenalty = 1.0;
  Complex act = connection_action(E, p);
  return std::abs(complex_quantization_phase(act.real())) +
         kImPenalty * std::abs(act.imag());
}

}  // namespace ptspectra
