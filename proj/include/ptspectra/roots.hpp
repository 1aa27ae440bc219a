#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"

namespace ptspectra {

namespace detail {

inline Complex horner(const std::vector<Complex>& c, Complex z,
                      Complex* dp = nullptr) {
  Complex p = c.back(), d = 0.0;
  for (int i = int(c.size()) - 2; i >= 0; --i) {
    d = d * z + p;
    p = p * z + c[size_t(i)];
  }
  if (dp) *dp = d;
  return p;
}

}  // namespace detail

// All roots of p(z) = c[0] + c[1] z + ... + c[deg] z^deg by Aberth-Ehrlich
// iteration. Roots are assumed simple (clustered/multiple roots converge
// slowly and lose accuracy); degree is capped at 32.
inline std::vector<Complex> poly_roots(std::vector<Complex> coeffs) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0)
    coeffs.pop_back();
  if (coeffs.size() < 2 || std::abs(coeffs.back()) == 0.0)
    throw DegenerateLeadingCoefficient("poly_roots: zero leading coefficient");
  int deg = int(coeffs.size()) - 1;
  if (deg > 32) throw std::invalid_argument("poly_roots: degree > 32");

  // strip exact zero roots
  std::vector<Complex> out;
  size_t nz = 0;
  while (nz < coeffs.size() - 1 && std::abs(coeffs[nz]) == 0.0) ++nz;
  for (size_t i = 0; i < nz; ++i) out.push_back(0.0);
  if (nz) coeffs.erase(coeffs.begin(), coeffs.begin() + long(nz));
  deg = int(coeffs.size()) - 1;
  if (deg == 0) return out;

  double cmax = 0.0;
  for (auto& c : coeffs) cmax = std::max(cmax, std::abs(c));

  // Cauchy-style radius and staggered initial ring
  double radius = 0.0;
  for (int i = 0; i < deg; ++i)
    radius = std::max(radius,
                      std::pow(std::abs(coeffs[size_t(i)] / coeffs.back()),
                               1.0 / (deg - i)));
  radius = 2.0 * std::max(radius, 1e-12);
  std::vector<Complex> z;
  z.resize(size_t(deg));
  for (int i = 0; i < deg; ++i)
    z[size_t(i)] = std::polar(radius, 2.0 * kPi * i / deg + 0.4);

  for (int it = 0; it < 200; ++it) {
    double move = 0.0;
    for (int i = 0; i < deg; ++i) {
      Complex d;
      Complex p = detail::horner(coeffs, z[size_t(i)], &d);
      if (std::abs(p) == 0.0) continue;
      Complex newton = p / d;
      Complex rep = 0.0;
      for (int j = 0; j < deg; ++j)
        if (j != i) rep += 1.0 / (z[size_t(i)] - z[size_t(j)]);
      Complex step = newton / (1.0 - newton * rep);
      z[size_t(i)] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-14 * radius) break;
  }
  // Newton polish
  for (auto& zi : z)
    for (int k = 0; k < 3; ++k) {
      Complex d;
      Complex p = detail::horner(coeffs, zi, &d);
      if (std::abs(d) > 0.0) zi -= p / d;
    }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

struct RootResult {
  Complex root{};
  Complex residual{};
  bool converged = false;
  int iterations = 0;
};

// Secant iteration for a scalar analytic function. On failure returns the
// best iterate with converged = false instead of throwing.
inline RootResult find_root_complex(const std::function<Complex(Complex)>& f,
                                    Complex seed, double tol,
                                    int max_iter = 100) {
  Complex x0 = seed;
  Complex x1 = seed + (std::abs(seed) > 1e-8 ? seed * 1e-5 : Complex(1e-7, 0));
  Complex f0 = f(x0), f1 = f(x1);
  RootResult best{x0, f0, std::abs(f0) <= tol, 0};
  if (std::abs(f1) < std::abs(f0)) best = {x1, f1, std::abs(f1) <= tol, 0};
  for (int it = 1; it <= max_iter; ++it) {
    Complex df = f1 - f0;
    if (std::abs(df) == 0.0) break;
    Complex x2 = x1 - f1 * (x1 - x0) / df;
    if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag())) break;
    Complex f2 = f(x2);
    x0 = x1; f0 = f1; x1 = x2; f1 = f2;
    if (std::abs(f2) < std::abs(best.residual))
      best = {x2, f2, false, it};
    if (std::abs(f2) <= tol) {
      best = {x2, f2, true, it};
      break;
    }
    if (std::abs(x1 - x0) <= 1e-16 * (std::abs(x1) + 1.0) &&
        std::abs(f2) <= 1e3 * tol)
      break;  // stagnated at the noise floor
  }
  return best;
}

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
inline double brent_root(const std::function<double(double)>& f, double a,
                         double b, double xtol = 1e-14, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw std::invalid_argument("brent_root: no sign change in bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  return b;
}

}  // namespace ptspectra
