#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ptspectra/errors.hpp"

namespace ptspectra {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Distance below which a point counts as sitting on a turning point
// (dimensionless y-plane units).
inline constexpr double kTolTurningPoint = 1e-6;
// Default absolute tolerance of the adaptive path quadrature.
inline constexpr double kTolQuadrature = 1e-10;

// One truncated model instance: H = p^2 - g (i x)^{2n+1} on x in [-L, L]
// with Dirichlet walls.
struct ModelParams {
  int n = 1;        // potential index, exponent 2n+1
  double g = 1.0;   // coupling, energy * length^-(2n+1)
  double L = 1.0;   // half-interval length
  double hbar = 1.0;

  void validate() const {
    if (n < 0) throw std::invalid_argument("ModelParams: n must be >= 0");
    if (!(std::isfinite(g) && g > 0.0))
      throw std::invalid_argument("ModelParams: g must be finite and > 0");
    if (!(std::isfinite(L) && L > 0.0))
      throw std::invalid_argument("ModelParams: L must be finite and > 0");
    if (!(std::isfinite(hbar) && hbar > 0.0))
      throw std::invalid_argument("ModelParams: hbar must be finite and > 0");
    if (!std::isfinite(action_scale()))
      throw std::invalid_argument("ModelParams: action scale overflows");
  }

  // g^(1/2) L^((2n+3)/2) / hbar: converts dimensionless y-plane actions to
  // the phase units of the quantization conditions.
  double action_scale() const {
    return std::sqrt(g) * std::pow(L, 0.5 * (2 * n + 3)) / hbar;
  }

  // |V| at the wall; also the mapping scale E = emapped * g L^{2n+1}.
  double potential_scale() const { return g * std::pow(L, 2 * n + 1); }

  Complex map_energy(Complex E) const { return E / potential_scale(); }
  Complex unmap_energy(Complex emapped) const {
    return emapped * potential_scale();
  }

  // Empty-box level j (g = 0 limit): pi^2 hbar^2 j^2 / (4 L^2).
  double box_level(int j) const {
    return kPi * kPi * hbar * hbar * j * j / (4.0 * L * L);
  }
};

// Q(y) = emapped + i (-1)^n y^{2n+1}, the dimensionless form of E - V(x)
// with y = x/L and emapped = E / (g L^{2n+1}).
struct Qfunction {
  Complex emapped;
  int n = 0;

  Complex operator()(Complex y) const {
    return emapped + phase() * pow_odd(y);
  }
  Complex derivative(Complex y) const {
    int m = 2 * n + 1;
    Complex p = Complex(1.0, 0.0);
    for (int i = 0; i < m - 1; ++i) p *= y;
    return phase() * double(m) * p;
  }

  // i (-1)^n
  Complex phase() const { return (n % 2 == 0) ? Complex(0, 1) : Complex(0, -1); }

  Complex pow_odd(Complex y) const {
    int m = 2 * n + 1;
    Complex p = y;
    for (int i = 1; i < m; ++i) p *= y;
    return p;
  }

  // The 2n+1 simple roots of Q, i.e. solutions of y^{2n+1} = i (-1)^n emapped,
  // by direct radicals. Returned in increasing principal argument.
  std::vector<Complex> roots() const {
    std::vector<Complex> out;
    int m = 2 * n + 1;
    Complex rhs = Complex(0, 1) * ((n % 2 == 0) ? 1.0 : -1.0) * emapped;
    double r = std::pow(std::abs(rhs), 1.0 / m);
    double th0 = std::arg(rhs) / m;
    out.reserve(m);
    for (int k = 0; k < m; ++k)
      out.push_back(std::polar(r, th0 + 2.0 * kPi * k / m));
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
      return std::arg(a) < std::arg(b);
    });
    return out;
  }
};

inline bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace ptspectra
