#pragma once

// Self-contained complex Airy function Ai(z): exact-coefficient Maclaurin
// series (in double-double arithmetic, the two standard series solutions of
// w'' = z w) inside |z| <= z_switch, Poincare asymptotics outside, and the
// rotation identity Ai(z) + mu Ai(mu z) + mu^2 Ai(mu^2 z) = 0 to reach the
// sector around arg z = pi. A scaled form (mantissa, exponent) is provided
// for products that would otherwise overflow.

#include <cmath>
#include <complex>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"

namespace ptspectra {

// Maclaurin/asymptotic crossover. The double-double series is accurate to
// ~1e-22 everywhere inside, while the truncated Poincare series only reaches
// ~2e-9 in its worst sector at |z| = 6.5; 7.2 restores a comfortable margin
// for the 1e-9 method-switch continuity requirement.
inline constexpr double kAirySwitchRadius = 7.2;

namespace airy_detail {

// ---- minimal double-double kernel (Dekker/Knuth) ----
struct DD {
  double hi = 0, lo = 0;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
inline void split(double a, double& h, double& l) {
  double t = 134217729.0 * a;  // 2^27 + 1
  h = t - (t - a);
  l = a - h;
}
inline DD two_prod(double a, double b) {
  double p = a * b;
  double ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
}
inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}
inline DD dd_sub(DD a, DD b) { return dd_add(a, DD{-b.hi, -b.lo}); }
inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}
inline DD dd_mul_d(DD a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}
inline DD dd_div_d(DD a, double b) {
  double q0 = a.hi / b;
  DD p = two_prod(q0, b);
  double r = ((a.hi - p.hi) - p.lo) + a.lo;
  return quick_two_sum(q0, r / b);
}

struct DDC {
  DD re, im;
};

inline DDC ddc(Complex z) { return {DD{z.real(), 0}, DD{z.imag(), 0}}; }
inline Complex to_complex(DDC z) {
  return {z.re.hi + z.re.lo, z.im.hi + z.im.lo};
}
inline DDC ddc_add(DDC a, DDC b) {
  return {dd_add(a.re, b.re), dd_add(a.im, b.im)};
}
inline DDC ddc_mul(DDC a, DDC b) {
  return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
          dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}
inline DDC ddc_mul_d(DDC a, double s) {
  return {dd_mul_d(a.re, s), dd_mul_d(a.im, s)};
}
inline DDC ddc_div_d(DDC a, double s) {
  return {dd_div_d(a.re, s), dd_div_d(a.im, s)};
}
inline double ddc_abs(DDC a) { return std::hypot(a.re.hi, a.im.hi); }

// Ai(0) and Ai'(0) to double-double precision
inline constexpr double kAi0Hi = 3.55028053887817219e-01;
inline constexpr double kAi0Lo = 2.05233632436211994e-17;
inline constexpr double kAip0Hi = -2.58819403792806824e-01;
inline constexpr double kAip0Lo = 2.52224311161083207e-17;

inline constexpr double kInv2SqrtPi = 2.82094791773878140e-01;
inline constexpr double kInvSqrtPi = 5.64189583547756279e-01;

inline const Complex kMu = Complex(-0.5, 0.8660254037844386467637231707529362);

// Maclaurin evaluation of Ai and Ai' via the two power-series solutions of
// w'' = z w, summed in double-double to absorb the exponential cancellation
// in the decaying sector.
inline void maclaurin_ai(Complex z, Complex* ai, Complex* aip) {
  DDC z3 = ddc_mul(ddc_mul(ddc(z), ddc(z)), ddc(z));
  const DD c1{kAi0Hi, kAi0Lo};
  const DD c2{kAip0Hi, kAip0Lo};

  // f: exponents 3k, term ratio z^3 / ((3k-1)(3k))
  // g: exponents 3k+1, ratio z^3 / ((3k)(3k+1))
  // f': exponents 3k-1 (k>=1), first term z^2/2, ratio z^3 (k+1)/(k(3k+2)(3k+3))
  // g': exponents 3k, first term 1, ratio z^3 / ((3k-2) 3k)
  DDC f = ddc(Complex(1, 0)), tf = f;
  DDC g = ddc(z), tg = g;
  DDC gp = ddc(Complex(1, 0)), tgp = gp;
  DDC z2 = ddc_mul(ddc(z), ddc(z));
  DDC tfp = ddc_div_d(z2, 2.0);
  DDC fp = tfp;
  double scale = std::max(1.0, ddc_abs(f));
  for (int k = 1; k < 400; ++k) {
    tf = ddc_div_d(ddc_mul(tf, z3), double(3 * k - 1) * double(3 * k));
    f = ddc_add(f, tf);
    tg = ddc_div_d(ddc_mul(tg, z3), double(3 * k) * double(3 * k + 1));
    g = ddc_add(g, tg);
    tgp = ddc_div_d(ddc_mul(tgp, z3), double(3 * k - 2) * double(3 * k));
    gp = ddc_add(gp, tgp);
    if (k >= 2) {
      tfp = ddc_div_d(ddc_mul_d(ddc_mul(tfp, z3), double(k)),
                      double(k - 1) * double(3 * k - 1) * double(3 * k));
      fp = ddc_add(fp, tfp);
    }
    scale = std::max(scale, ddc_abs(f));
    if (ddc_abs(tf) < 1e-36 * scale && ddc_abs(tg) < 1e-36 * scale) break;
  }
  DDC ai_dd = ddc_add(ddc_mul(f, DDC{c1, DD{}}),
                      ddc_mul(g, DDC{c2, DD{}}));
  DDC aip_dd = ddc_add(ddc_mul(fp, DDC{c1, DD{}}),
                       ddc_mul(gp, DDC{c2, DD{}}));
  if (ai) *ai = to_complex(ai_dd);
  if (aip) *aip = to_complex(aip_dd);
}

// Poincare mantissa sums: Ai(z) ~ inv2sqrtpi z^{-1/4} e^{-xi} S_u(xi) and
// Ai'(z) ~ -inv2sqrtpi z^{1/4} e^{-xi} S_v(xi), truncated at the smallest
// term. Intended for |arg z| <= 2 pi/3.
inline void asymptotic_sums(Complex xi, Complex* su, Complex* sv) {
  Complex invxi = 1.0 / xi;
  Complex pw = 1.0;
  double u = 1.0;
  Complex s_u = 1.0, s_v = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 120; ++k) {
    u *= double(6 * k - 5) * double(6 * k - 1) / (72.0 * k);
    pw *= -invxi;
    double v = u * double(6 * k + 1) / double(1 - 6 * k);
    double mag = u * std::abs(pw);
    if (mag > prev) break;  // divergence onset; stop at best truncation
    s_u += u * pw;
    s_v += v * pw;
    prev = mag;
    if (mag < 1e-19 * std::abs(s_u)) break;
  }
  if (su) *su = s_u;
  if (sv) *sv = s_v;
}

inline Complex principal_xi(Complex z) {
  return (2.0 / 3.0) * z * std::sqrt(z);
}

struct ScaledPair {
  Complex mantissa;  // Ai = mantissa * exp(-xi)
  Complex xi;        // principal (2/3) z^{3/2}
};

// direct asymptotic zone, |arg z| <= 2 pi / 3
inline ScaledPair asymptotic_scaled(Complex z) {
  Complex xi = principal_xi(z);
  Complex su;
  asymptotic_sums(xi, &su, nullptr);
  Complex zq = std::sqrt(std::sqrt(z));  // z^{1/4}, principal
  return {kInv2SqrtPi / zq * su, xi};
}

}  // namespace airy_detail

struct AiryScaled {
  Complex mantissa;  // Ai(z) = mantissa * exp(-xi)
  Complex xi;
};

enum class AiryMethod { maclaurin, asymptotic_dominant, asymptotic_oscillatory };

struct AiryEval {
  Complex z;
  Complex ai;
  AiryMethod method = AiryMethod::maclaurin;
};

// Scaled evaluation, safe in deep dominant/recessive sectors at any radius.
inline AiryScaled airy_ai_scaled(Complex z) {
  using namespace airy_detail;
  double r = std::abs(z);
  if (r <= kAirySwitchRadius) {
    Complex ai;
    maclaurin_ai(z, &ai, nullptr);
    Complex xi = principal_xi(z);
    return {ai * std::exp(xi), xi};
  }
  double a = std::arg(z);
  if (std::abs(a) <= 2.0 * kPi / 3.0) {
    ScaledPair p = asymptotic_scaled(z);
    return {p.mantissa, p.xi};
  }
  // rotate into the reliable sector: Ai(z) = -mu Ai(mu z) - mu^2 Ai(mu^2 z)
  Complex xi = principal_xi(z);
  ScaledPair p1 = asymptotic_scaled(kMu * z);
  ScaledPair p2 = asymptotic_scaled(kMu * kMu * z);
  Complex e1 = xi - p1.xi;
  Complex e2 = xi - p2.xi;
  // one of e1, e2 is ~0 and the other ~2 xi with Re <= 0 here
  Complex m = -kMu * p1.mantissa * std::exp(e1) -
              kMu * kMu * p2.mantissa * std::exp(e2);
  return {m, xi};
}

inline AiryEval airy_ai_eval(Complex z) {
  AiryScaled s = airy_ai_scaled(z);
  double growth = -s.xi.real();
  if (growth > 705.0)
    throw OverflowRisk("airy_ai: dominant exponential overflows double range; "
                       "use airy_ai_scaled");
  AiryEval ev;
  ev.z = z;
  ev.ai = (growth < -745.0) ? Complex(0, 0) : s.mantissa * std::exp(-s.xi);
  if (std::abs(z) <= kAirySwitchRadius)
    ev.method = AiryMethod::maclaurin;
  else
    ev.method = std::abs(std::arg(z)) <= 2.0 * kPi / 3.0
                    ? AiryMethod::asymptotic_dominant
                    : AiryMethod::asymptotic_oscillatory;
  return ev;
}

inline Complex airy_ai(Complex z) { return airy_ai_eval(z).ai; }

inline Complex airy_ai_prime(Complex z) {
  using namespace airy_detail;
  double r = std::abs(z);
  if (r <= kAirySwitchRadius) {
    Complex aip;
    maclaurin_ai(z, nullptr, &aip);
    return aip;
  }
  double a = std::arg(z);
  if (std::abs(a) <= 2.0 * kPi / 3.0) {
    Complex xi = principal_xi(z);
    if (-xi.real() > 705.0)
      throw OverflowRisk("airy_ai_prime: exponential overflow");
    Complex sv;
    asymptotic_sums(xi, nullptr, &sv);
    Complex zq = std::sqrt(std::sqrt(z));
    return -kInv2SqrtPi * zq * sv * std::exp(-xi);
  }
  // d/dz of the rotation identity
  return -kMu * kMu * airy_ai_prime(kMu * z) - kMu * airy_ai_prime(kMu * kMu * z);
}

// Zeroth-order WKB forms: the decaying exponential in the principal sector
// and the sine form on the negative real axis.
inline Complex airy_ai_wkb(Complex z) {
  using namespace airy_detail;
  if (std::abs(z) < 3.0)
    throw SectorViolation("airy_ai_wkb: |z| >= 3 required");
  if (z.imag() == 0.0 && z.real() < 0.0) {
    double s = -z.real();
    double s32 = (2.0 / 3.0) * s * std::sqrt(s);
    return kInvSqrtPi / std::sqrt(std::sqrt(s)) * std::sin(s32 + kPi / 4.0);
  }
  Complex xi = principal_xi(z);
  if (-xi.real() > 705.0) throw OverflowRisk("airy_ai_wkb: overflow");
  return kInv2SqrtPi / std::sqrt(std::sqrt(z)) * std::exp(-xi);
}

// Positive s_k with Ai(-s_k) = 0, seeded by the WKB estimate
// [3 pi (4k-1)/8]^{2/3} and refined by Newton with the exact derivative.
inline std::vector<double> airy_zeros(int count) {
  if (count < 0 || count > 100)
    throw std::invalid_argument("airy_zeros: count must be in [0, 100]");
  std::vector<double> out;
  out.reserve(size_t(count));
  for (int k = 1; k <= count; ++k) {
    double s = std::pow(3.0 * kPi * (4 * k - 1) / 8.0, 2.0 / 3.0);
    for (int it = 0; it < 30; ++it) {
      double ai = airy_ai(Complex(-s, 0)).real();
      double aip = airy_ai_prime(Complex(-s, 0)).real();
      double step = ai / aip;  // s -> s + Ai(-s)/Ai'(-s)
      s += step;
      if (std::abs(step) < 1e-15 * s) break;
    }
    out.push_back(s);
  }
  return out;
}

// WKB seed used for the zeros; exposed so callers can reuse the estimate.
inline double airy_zero_wkb_estimate(int k) {
  return std::pow(3.0 * kPi * (4 * k - 1) / 8.0, 2.0 / 3.0);
}

}  // namespace ptspectra
