#pragma once

// Exact and WKB analysis of the n = 0 model (V = -i g x on [-L, L]): the
// problem maps onto the Airy equation, so eigenvalues are zeros of a 2x2
// Airy determinant. All evaluation is done in scaled (mantissa, exponent)
// form: the two determinant terms share a huge common exponential that is
// factored out before subtraction, which keeps the function finite for any
// kappa and leaves the zero set untouched.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ptspectra/airy.hpp"
#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/path.hpp"
#include "ptspectra/roots.hpp"
#include "ptspectra/scaling_graph.hpp"

namespace ptspectra {

struct LinearMapping {
  double kappa = 0;         // hbar^{-2/3} g^{1/3} L
  Complex z_plus, z_minus;  // Airy arguments at x = +-L
};

inline double linear_kappa(const ModelParams& p) {
  return std::pow(p.hbar, -2.0 / 3.0) * std::pow(p.g, 1.0 / 3.0) * p.L;
}

inline LinearMapping make_linear_mapping(Complex E, const ModelParams& p) {
  if (p.n != 0) throw WrongModel("linear model requires n = 0");
  double kappa = linear_kappa(p);
  Complex emapped = E / (p.g * p.L);
  Complex rot = std::polar(1.0, -kPi / 6.0);
  return {kappa, rot * kappa * (Complex(1, 0) - Complex(0, 1) * emapped),
          rot * kappa * (Complex(-1, 0) - Complex(0, 1) * emapped)};
}

enum class AiryPairing { ai_mu, ai_mu2, mu_mu2 };

struct ScaledDet {
  Complex value;      // determinant with exp(log_scale) factored out
  double log_scale;   // common real exponent removed
  double scale;       // max magnitude of the two (scaled) terms
  Complex log_term_ratio;  // log(T2/T1) with Im folded to (-pi, pi];
                           // vanishes exactly at determinant zeros and is
                           // nearly linear in E, unlike the determinant
                           // itself whose terms differ by huge exponentials
};

// w1(z+) w2(z-) - w1(z-) w2(z+) for the chosen Airy pairing, in scaled form.
inline ScaledDet characteristic_det(Complex E, const ModelParams& p,
                                    AiryPairing pairing = AiryPairing::ai_mu) {
  LinearMapping m = make_linear_mapping(E, p);
  const Complex mu = airy_detail::kMu;
  Complex f1 = 1.0, f2 = mu;
  switch (pairing) {
    case AiryPairing::ai_mu: f1 = 1.0; f2 = mu; break;
    case AiryPairing::ai_mu2: f1 = 1.0; f2 = mu * mu; break;
    case AiryPairing::mu_mu2: f1 = mu; f2 = mu * mu; break;
  }
  AiryScaled a1p = airy_ai_scaled(f1 * m.z_plus);
  AiryScaled a1m = airy_ai_scaled(f1 * m.z_minus);
  AiryScaled a2p = airy_ai_scaled(f2 * m.z_plus);
  AiryScaled a2m = airy_ai_scaled(f2 * m.z_minus);

  Complex s1 = a1p.xi + a2m.xi;  // T1 = m1 m2 exp(-s1)
  Complex s2 = a1m.xi + a2p.xi;  // T2 = m3 m4 exp(-s2)
  double r = std::max(-s1.real(), -s2.real());
  Complex t1 = a1p.mantissa * a2m.mantissa * std::exp(-s1 - r);
  Complex t2 = a1m.mantissa * a2p.mantissa * std::exp(-s2 - r);
  ScaledDet out;
  out.value = t1 - t2;
  out.log_scale = r;
  out.scale = std::max(std::abs(t1), std::abs(t2));
  Complex lr = std::log((a1m.mantissa * a2p.mantissa) /
                        (a1p.mantissa * a2m.mantissa)) +
               (s1 - s2);
  double im = std::remainder(lr.imag(), 2.0 * kPi);
  out.log_term_ratio = Complex(lr.real(), im);
  return out;
}

namespace linear_detail {

// For real E the determinant has a constant phase (mod pi) fixed by the PT
// relation between the pairings; this multiplier turns it into a real-valued
// scan function.
inline Complex phase_fix(AiryPairing pairing) {
  switch (pairing) {
    case AiryPairing::ai_mu: return std::polar(1.0, kPi / 3.0);
    case AiryPairing::ai_mu2: return Complex(1, 0);
    default: return std::polar(1.0, -kPi / 3.0);
  }
}

}  // namespace linear_detail

// Determinant divided by its dominant factor Ai(mu z+):
// F(E) = Ai(z-) - Ai(z+) Ai(mu z-) / Ai(mu z+), in scaled form. Near a
// complex eigenvalue the oscillating Ai(z-) crosses zero with an O(1)
// slope while the correction term is exponentially small, so F is the
// stable surface for secant iteration (the raw determinant's two terms
// differ by huge exponentials until the last moment).
inline Complex ssh_root_residual(Complex E, const ModelParams& p) {
  LinearMapping m = make_linear_mapping(E, p);
  const Complex mu = airy_detail::kMu;
  AiryScaled zm = airy_ai_scaled(m.z_minus);
  AiryScaled zp = airy_ai_scaled(m.z_plus);
  AiryScaled mzm = airy_ai_scaled(mu * m.z_minus);
  AiryScaled mzp = airy_ai_scaled(mu * m.z_plus);
  Complex e1 = -zm.xi;
  Complex e2 = -zp.xi - mzm.xi + mzp.xi;
  double r = std::max(e1.real(), e2.real());
  return zm.mantissa * std::exp(e1 - r) -
         (zp.mantissa * mzm.mantissa / mzp.mantissa) * std::exp(e2 - r);
}

// Real-valued along the real E axis; its sign changes bracket the real
// eigenvalues.
inline double real_axis_det(double E, const ModelParams& p,
                            AiryPairing pairing = AiryPairing::ai_mu) {
  ScaledDet d = characteristic_det(Complex(E, 0), p, pairing);
  return (linear_detail::phase_fix(pairing) * d.value).real();
}

// All eigenvalues remain real while g L^3 stays below this bound.
inline double pt_threshold_gl3(double hbar = 1.0) {
  double s1_wkb = 9.0 * kPi * hbar / 8.0;
  return std::pow(0.75, 1.5) * s1_wkb * s1_wkb;
}

struct SshBranchPoint {
  double s = 0;
  char branch = '3';   // '3' = upper (+i) family, 'X' = conjugate
  Complex e_mapped;
  Complex e_phys;
};

// Complex-pair predictions from the Airy-zero mechanism: one conjugate pair
// per Airy zero s_k below the segment end s_c = 2 kappa / sqrt(3).
inline std::vector<std::pair<SshBranchPoint, SshBranchPoint>>
ssh_complex_eigenvalues(const ModelParams& p) {
  if (p.n != 0) throw WrongModel("ssh_complex_eigenvalues requires n = 0");
  double kappa = linear_kappa(p);
  double s_c = 2.0 * kappa / std::sqrt(3.0);
  std::vector<std::pair<SshBranchPoint, SshBranchPoint>> out;
  int chunk = 10;
  std::vector<double> zeros = airy_zeros(chunk);
  for (int k = 1;; ++k) {
    if (k > int(zeros.size())) {
      if (zeros.size() >= 100) break;
      chunk = std::min(100, chunk + 20);
      zeros = airy_zeros(chunk);
      if (k > int(zeros.size())) break;
    }
    double s = zeros[size_t(k - 1)];
    if (s >= s_c) break;
    Complex upper = Complex(0, 1) + std::polar(1.0, -kPi / 3.0) * (s / kappa);
    SshBranchPoint a{s, '3', upper, upper * p.g * p.L};
    SshBranchPoint b{s, 'X', std::conj(upper), std::conj(upper) * p.g * p.L};
    out.push_back({a, b});
  }
  return out;
}

// PT-symmetric particle-in-a-box quantization: the full-interval action
// equals j pi. Only roots in the validity window emapped >= 1/sqrt(3) are
// returned; `rejected` counts the filtered ones.
inline std::vector<double> box_quantization_real(const ModelParams& p,
                                                 int j_max,
                                                 int* rejected = nullptr) {
  if (p.n != 0) throw WrongModel("box_quantization_real requires n = 0");
  double scale = p.action_scale();
  auto full_action = [&](double emapped) {
    Qfunction q{Complex(emapped, 0), 0};
    ComplexPath path;
    path.vertices = {Complex(-1, 0), Complex(1, 0)};
    path.branch_seed = std::sqrt(q(Complex(-1, 0)));
    // absolute tolerance keyed to the integrand size, so the g -> 0 limit
    // (emapped -> infinity) stays resolvable in doubles
    double tol = kTolQuadrature * std::max(1.0, std::sqrt(emapped));
    return scale * action_integral(path, q, tol).real();
  };
  std::vector<double> out;
  int skipped = 0;
  for (int j = 1; j <= j_max; ++j) {
    double target = j * kPi;
    double lo = 1e-6, hi = 4.0;
    while (full_action(hi) < target && hi < 1e12) hi *= 2.0;
    double emapped =
        brent_root([&](double e) { return full_action(e) - target; }, lo, hi);
    if (emapped >= 1.0 / std::sqrt(3.0))
      out.push_back(emapped * p.g * p.L);
    else
      ++skipped;
  }
  if (rejected) *rejected = skipped;
  return out;
}

// Closed-form n = 0 scaling branch.
inline ScalingBranch scaling_graph_n0() {
  ScalingBranch br;
  br.n = 0;
  br.tau_c = std::pow(2.0, 2.5) * std::pow(3.0, -1.75);
  br.e_c = 1.0 / std::sqrt(3.0);
  const Complex dir = std::polar(1.0, -kPi / 3.0);
  const int count = 400;
  for (int i = 0; i <= count; ++i) {
    double tau = br.tau_c * double(i) / count;
    Complex e = Complex(0, 1) + dir * std::pow(1.5 * tau, 2.0 / 3.0);
    double tslope = std::max(tau, 1e-12);
    Complex slope = dir * std::pow(1.5 * tslope, -1.0 / 3.0);
    br.samples.push_back({tau, e, slope});
  }
  br.samples.back().emapped = Complex(br.e_c, 0.0);
  return br;
}

struct ExactEigenvalue {
  Complex E;
  double residual = 0;  // |det| / scale at the root
  bool is_real = false;
};

// The `count` smallest-|E| exact eigenvalues of the n = 0 model: real ones
// from sign changes of the phase-fixed determinant, complex ones by secant
// from the Airy-zero predictions (plus near-merger minima as safety seeds),
// conjugate partners completed by symmetry.
inline std::vector<ExactEigenvalue> linear_exact_spectrum(
    const ModelParams& p, int count) {
  if (p.n != 0) throw WrongModel("linear_exact_spectrum requires n = 0");
  p.validate();

  std::vector<ExactEigenvalue> found;
  auto add = [&](Complex E, double resid) {
    for (auto& e : found)
      if (std::abs(e.E - E) <= 1e-7 * (std::abs(E) + 1.0)) return;
    ExactEigenvalue r;
    r.E = E;
    r.residual = resid;
    r.is_real = std::abs(E.imag()) <= 1e-8 * std::abs(E);
    if (r.is_real) r.E = Complex(E.real(), 0.0);
    found.push_back(r);
  };

  auto det_norm = [&](Complex E) {
    ScaledDet d = characteristic_det(E, p);
    return std::abs(d.value) / (d.scale + 1e-300);
  };

  // complex pairs first: secant on the SSH-stable residual from the
  // Airy-zero seeds
  auto ssh_res = [&](Complex E) { return ssh_root_residual(E, p); };
  for (auto& pair : ssh_complex_eigenvalues(p)) {
    auto res = find_root_complex(ssh_res, pair.first.e_phys, 1e-13);
    if (res.converged && res.root.imag() > 1e-10 * std::abs(res.root)) {
      add(res.root, det_norm(res.root));
      add(std::conj(res.root), det_norm(std::conj(res.root)));
    }
  }

  // real-axis scan, extending the window until enough eigenvalues are in
  double u_hi = kPi * p.hbar / (2.0 * p.L) * (count + 2);  // box estimate
  for (int expand = 0; expand < 8; ++expand) {
    found.erase(std::remove_if(found.begin(), found.end(),
                               [](const ExactEigenvalue& e) {
                                 return e.is_real;
                               }),
                found.end());
    int boxes = std::max(4, int(u_hi * 2.0 * p.L / (kPi * p.hbar)) + 1);
    int grid = 40 * boxes;
    double prev_u = u_hi * 1e-6;
    double prev_f = real_axis_det(prev_u * prev_u, p);
    double prev_mag = det_norm(Complex(prev_u * prev_u, 0));
    double pprev_mag = prev_mag + 1.0;
    for (int i = 1; i <= grid; ++i) {
      double u = u_hi * (1e-6 + (1.0 - 1e-6) * double(i) / grid);
      double E = u * u;
      double f = real_axis_det(E, p);
      double mag = det_norm(Complex(E, 0));
      if (prev_f * f < 0.0) {
        double root = brent_root([&](double x) { return real_axis_det(x, p); },
                                 prev_u * prev_u, E);
        add(Complex(root, 0), det_norm(Complex(root, 0)));
      } else if (i >= 2 && prev_mag < 0.02 && prev_mag < mag &&
                 prev_mag < pprev_mag) {
        // near-merger minimum without sign change: park complex seeds there
        double spacing = u_hi * u_hi / grid;
        for (double sgn : {1.0, -1.0}) {
          Complex seed(prev_u * prev_u, sgn * 0.25 * spacing);
          auto res = find_root_complex(ssh_res, seed, 1e-13);
          if (res.converged && std::abs(res.root.imag()) >
                                   1e-10 * std::abs(res.root))
            add(res.root, det_norm(res.root));
        }
      }
      prev_u = u;
      prev_f = f;
      pprev_mag = prev_mag;
      prev_mag = mag;
    }
    std::sort(found.begin(), found.end(),
              [](const ExactEigenvalue& a, const ExactEigenvalue& b) {
                return std::abs(a.E) < std::abs(b.E);
              });
    if (int(found.size()) >= count &&
        std::abs(found[size_t(count - 1)].E) < 0.81 * u_hi * u_hi)
      break;
    u_hi *= 1.5;
  }
  if (int(found.size()) > count) found.resize(size_t(count));
  return found;
}

}  // namespace ptspectra
