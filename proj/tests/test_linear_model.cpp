#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "ptspectra/linear_model.hpp"

using namespace ptspectra;

namespace {
const ModelParams kP13{0, 1.0, 3.0, 1.0};  // kappa = 3, one complex pair
}

TEST_CASE("linear mapping geometry") {
  ModelParams p{0, 2.0, 1.5, 1.0};
  LinearMapping m = make_linear_mapping(Complex(0.7, 0.1), p);
  CHECK(m.kappa > 0);
  Complex gap = m.z_plus - m.z_minus;
  Complex expect = std::polar(1.0, -kPi / 6.0) * 2.0 * m.kappa;
  CHECK(std::abs(gap - expect) < 1e-13 * std::abs(expect));
  CHECK_THROWS_AS(make_linear_mapping(Complex(1, 0), ModelParams{1, 1, 1, 1}),
                  WrongModel);
}

TEST_CASE("all three Airy pairings share their zero set") {
  auto spec = linear_exact_spectrum(kP13, 6);
  REQUIRE(spec.size() == 6);
  for (auto& ev : spec) {
    for (auto pairing :
         {AiryPairing::ai_mu, AiryPairing::ai_mu2, AiryPairing::mu_mu2}) {
      ScaledDet d = characteristic_det(ev.E, kP13, pairing);
      CHECK(std::abs(d.value) <= 1e-8 * d.scale);
    }
  }
}

TEST_CASE("empty-box limit: box levels almost annihilate the determinant") {
  ModelParams p{0, 1e-8, 1.0, 1.0};
  double E = p.box_level(1);
  ScaledDet d = characteristic_det(Complex(E, 0), p);
  CHECK(std::abs(d.value) <= 1e-4 * d.scale);
  // midway between levels the determinant is far from zero
  ScaledDet mid = characteristic_det(Complex(1.5 * E, 0), p);
  CHECK(std::abs(mid.value) >= 1e-2 * mid.scale);
}

TEST_CASE("Airy-zero prediction nearly annihilates the determinant") {
  double s1 = airy_zeros(1)[0];
  Complex E = Complex(0, 1) * kP13.g * kP13.L +
              std::polar(1.0, -kPi / 3.0) * s1 *
                  std::pow(kP13.g * kP13.hbar, 2.0 / 3.0);
  ScaledDet d = characteristic_det(E, kP13);
  // At the prediction the oscillating factor Ai(z_minus) is locally zero, so
  // "small" means small against the oscillation envelope of the dominant
  // term, |Ai(z-)|_amp * |Ai(mu z+)|, compared in log magnitudes.
  LinearMapping m = make_linear_mapping(E, kP13);
  double amp_osc = airy_detail::kInvSqrtPi /
                   std::sqrt(std::sqrt(std::abs(m.z_minus)));
  AiryScaled big = airy_ai_scaled(airy_detail::kMu * m.z_plus);
  double env_log = std::log(amp_osc) + std::log(std::abs(big.mantissa)) -
                   big.xi.real();
  double det_log = std::log(std::abs(d.value)) + d.log_scale;
  CHECK(det_log <= std::log(5e-2) + env_log);
}

TEST_CASE("complex pairs appear exactly above the reality bound") {
  // true and WKB thresholds for g L^3 differ by ~2%; test clear of both
  ModelParams below{0, 1.0, std::cbrt(7.3), 1.0};
  CHECK(ssh_complex_eigenvalues(below).empty());
  CHECK(7.3 < pt_threshold_gl3(1.0));
  ModelParams above{0, 1.0, std::cbrt(8.9), 1.0};
  CHECK(!ssh_complex_eigenvalues(above).empty());
  CHECK(8.9 > pt_threshold_gl3(1.0));
  CHECK(std::abs(pt_threshold_gl3(1.0) - 8.113) < 2e-3);
}

TEST_CASE("Re E of a predicted pair is independent of L at fixed g") {
  double re_prev = -1;
  for (double L : {3.0, 5.0, 9.0}) {
    ModelParams p{0, 1.0, L, 1.0};
    auto pairs = ssh_complex_eigenvalues(p);
    REQUIRE(!pairs.empty());
    double re = pairs[0].first.e_phys.real();
    if (re_prev > 0) CHECK(std::abs(re - re_prev) < 1e-10);
    re_prev = re;
    // conjugate structure
    CHECK(std::abs(pairs[0].first.e_mapped -
                   std::conj(pairs[0].second.e_mapped)) < 1e-14);
  }
}

TEST_CASE("segment end maps to the real value 1/sqrt(3)") {
  ModelParams p = kP13;
  double kappa = linear_kappa(p);
  double s_c = 2.0 * kappa / std::sqrt(3.0);
  Complex end = Complex(0, 1) + std::polar(1.0, -kPi / 3.0) * (s_c / kappa);
  CHECK(std::abs(end - Complex(1.0 / std::sqrt(3.0), 0)) < 1e-14);
}

TEST_CASE("box quantization reduces to the empty box as g -> 0") {
  ModelParams p{0, 1e-10, 1.0, 1.0};
  auto levels = box_quantization_real(p, 5);
  REQUIRE(levels.size() == 5);
  for (int j = 1; j <= 5; ++j)
    CHECK(std::abs(levels[size_t(j - 1)] - p.box_level(j)) <=
          1e-6 * p.box_level(j));
}

TEST_CASE("quantization integrand is real for real E") {
  ModelParams p{0, 1.0, 2.0, 1.0};
  for (double emapped : {0.7, 1.3, 4.0}) {
    Qfunction q{Complex(emapped, 0), 0};
    ComplexPath path;
    path.vertices = {Complex(-1, 0), Complex(1, 0)};
    path.branch_seed = std::sqrt(q(Complex(-1, 0)));
    Complex act = action_integral(path, q);
    CHECK(std::abs(act.imag()) <= 1e-12 * (1.0 + std::abs(act)));
  }
}

TEST_CASE("box quantization tracks the exact real spectrum at gL^3 = 1") {
  ModelParams p{0, 1.0, 1.0, 1.0};
  auto wkb = box_quantization_real(p, 5);
  auto exact = linear_exact_spectrum(p, 8);
  REQUIRE(wkb.size() == 5);
  for (size_t j = 0; j < wkb.size(); ++j) {
    double Ew = wkb[j];
    double best = 1e300;
    for (auto& ev : exact)
      if (ev.is_real) best = std::min(best, std::abs(ev.E.real() - Ew));
    // the lowest mode carries the full zeroth-order WKB error (~2%);
    // from j = 2 on the agreement is better than 1%
    CHECK(best <= (j == 0 ? 0.025 : 0.01) * Ew);
  }
}

TEST_CASE("closed-form n=0 branch endpoints and collinearity") {
  ScalingBranch br = scaling_graph_n0();
  CHECK(std::abs(br.samples.front().emapped - Complex(0, 1)) == 0.0);
  CHECK(std::abs(br.samples.back().emapped -
                 Complex(1.0 / std::sqrt(3.0), 0)) < 1e-12);
  CHECK(std::abs(br.tau_c - std::pow(2.0, 2.5) * std::pow(3.0, -1.75)) <
        1e-15);
  Complex a(0, 1), b(1.0 / std::sqrt(3.0), 0);
  Complex d = (b - a) / std::abs(b - a);
  for (auto& s : br.samples) {
    Complex rel = (s.emapped - a) / d;
    CHECK(std::abs(rel.imag()) <= 1e-12);
  }
}

TEST_CASE("exact spectrum: conjugate pairing and residuals") {
  auto spec = linear_exact_spectrum(kP13, 12);
  REQUIRE(int(spec.size()) == 12);
  int complex_count = 0;
  for (auto& ev : spec) {
    CHECK(ev.residual <= 1e-8);
    if (!ev.is_real) {
      ++complex_count;
      ScaledDet d = characteristic_det(std::conj(ev.E), kP13);
      CHECK(std::abs(d.value) <= 1e-8 * d.scale);
    }
  }
  CHECK(complex_count == 2);  // kappa = 3: only s_1 < s_c
}

TEST_CASE("predicted pairs seed convergence to exact complex roots") {
  ModelParams p{0, 1.0, 6.5, 1.0};  // s_c ~ 7.5 >= s_3
  double s_c = 2.0 * linear_kappa(p) / std::sqrt(3.0);
  auto pairs = ssh_complex_eigenvalues(p);
  REQUIRE(pairs.size() >= 3);
  for (auto& pr : pairs) {
    if (pr.first.s >= 0.8 * s_c) continue;  // prediction validity window
    auto res = find_root_complex(
        [&](Complex E) { return ssh_root_residual(E, p); },
        pr.first.e_phys, 1e-13);
    CHECK(res.converged);
    CHECK(std::abs(res.root.imag()) > 1e-6);
    CHECK(std::abs(res.root - pr.first.e_phys) <=
          0.03 * std::abs(pr.first.e_phys));
  }
}

TEST_CASE("every predicted |E| grows without bound as L increases") {
  double prev = 0;
  for (double L : {3.0, 6.0, 12.0, 24.0}) {
    ModelParams p{0, 1.0, L, 1.0};
    auto pairs = ssh_complex_eigenvalues(p);
    REQUIRE(!pairs.empty());
    double lowest = 1e300;
    for (auto& pr : pairs) lowest = std::min(lowest, std::abs(pr.first.e_phys));
    CHECK(lowest > prev);
    prev = lowest;
  }
}
