#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "ptspectra/scaling_graph.hpp"
#include "ptspectra/linear_model.hpp"
#include "ptspectra/secular.hpp"
#include "ptspectra/shooting.hpp"
#include "support/oracles.hpp"

using namespace ptspectra;

TEST_CASE("full and inner actions are real for real E") {
  oracle::Rng rng(11);
  for (int n : {0, 1, 2}) {
    for (int i = 0; i < 16; ++i) {
      ModelParams p{n, 1.0, rng.uniform(0.5, 2.0), 1.0};
      double E = rng.uniform(0.2, 6.0) * p.potential_scale();
      SecularData d = secular_data(E, p);
      // reality enters through the identity checks below: the imaginary
      // parts live only in delta; the reported actions are finite reals
      CHECK(std::isfinite(d.action_total));
      CHECK(std::isfinite(d.action_inner));
      // PT mirror symmetry of the contour: the outer legs are conjugate, so
      // Im(total) cancels; verify by reconstructing the total action
      Qfunction q{Complex(E / p.potential_scale(), 0), p.n};
      Complex tot = action_integral(d.path, q,
                                    1e-10 * std::max(1.0, d.action_total));
      CHECK(std::abs(tot.imag()) <=
            1e-8 * (1.0 + std::abs(d.action_total) / p.action_scale()));
    }
  }
}

TEST_CASE("action identity: total = inner + 2 * edge") {
  oracle::Rng rng(17);
  int done = 0;
  while (done < 100) {
    int n = int(rng.next() % 3);
    ModelParams p{n, rng.uniform(0.5, 2.0), rng.uniform(0.5, 3.0), 1.0};
    double E = rng.uniform(0.1, 8.0) * p.potential_scale();
    SecularData d = secular_data(E, p);
    CHECK(std::abs(d.action_total - d.action_inner - 2.0 * d.action_edge) <=
          1e-8 * (1.0 + std::abs(d.action_total)));
    ++done;
  }
}

TEST_CASE("delta vanishes at the critical energy and flips sign across it") {
  ModelParams p{1, 1.0, 1.0, 1.0};
  ScalingBranch br = integrate_branch(1, 1e-10);
  double e_c = br.e_c;
  double below = secular_data((e_c - 0.05) * p.potential_scale(), p).delta;
  double at = secular_data(e_c * p.potential_scale(), p).delta;
  double above = secular_data((e_c + 0.05) * p.potential_scale(), p).delta;
  CHECK(below > 0);   // Bohr-Sommerfeld side amplifies cos
  CHECK(above < 0);   // box side suppresses it
  CHECK(std::abs(at) <= 1e-4);
}

TEST_CASE("bt_levels reproduce the empty box as g -> 0") {
  ModelParams p{1, 1e-12, 1.0, 1.0};
  auto levels = bt_levels(p, 4);
  for (int j = 1; j <= 4; ++j)
    CHECK(std::abs(levels[size_t(j - 1)] - p.box_level(j)) <=
          1e-8 * p.box_level(j));
}

TEST_CASE("bs_levels are independent of the box size") {
  ModelParams pa{1, 1.0, 5.0, 1.0};
  ModelParams pb{1, 1.0, 10.0, 1.0};
  auto a = bs_levels(pa, 4);
  auto b = bs_levels(pb, 4);
  for (size_t i = 0; i < 4; ++i)
    CHECK(std::abs(a[i] - b[i]) <= 1e-6 * a[i]);
}

TEST_CASE("bs_levels track the large-L shooting spectrum within 2%") {
  ModelParams p{1, 1.0, 6.0, 1.0};
  auto wkb = bs_levels(p, 8);
  auto spec = find_spectrum(p, 8);
  REQUIRE(spec.complete);
  for (int j = 3; j <= 8; ++j) {
    double exact = spec.records[size_t(j - 1)].E.real();
    CHECK(std::abs(wkb[size_t(j - 1)] - exact) <= 0.02 * exact);
  }
  CHECK_THROWS_AS(bs_levels(ModelParams{0, 1.0, 1.0, 1.0}, 2), NotMonotone);
}

TEST_CASE("both actions increase monotonically in E") {
  ModelParams p{1, 1.0, 1.5, 1.0};
  double prev_t = -1e300, prev_m = -1e300;
  for (int i = 1; i <= 40; ++i) {
    double E = 0.1 * i * p.potential_scale();
    SecularData d = secular_data(E, p);
    CHECK(d.action_total > prev_t);
    CHECK(d.action_inner > prev_m);
    prev_t = d.action_total;
    prev_m = d.action_inner;
  }
}

TEST_CASE("bounded secular residual vanishes at shooting eigenvalues") {
  // box-type side
  ModelParams pbt{1, 1.0, 0.3, 1.0};
  auto bt = find_spectrum(pbt, 8);
  for (int idx : {0, 3, 6}) {
    double E = bt.records[size_t(idx)].E.real();
    auto [rp, rm] = secular_residuals(E, pbt);
    CHECK(std::min(std::abs(rp), std::abs(rm)) <= 5e-2);
  }
  // Bohr-Sommerfeld side
  ModelParams pbs{1, 1.0, 6.0, 1.0};
  auto bs = find_spectrum(pbs, 6);
  for (int idx : {1, 3, 5}) {
    double E = bs.records[size_t(idx)].E.real();
    auto [rp, rm] = secular_residuals(E, pbs);
    CHECK(std::min(std::abs(rp), std::abs(rm)) <= 5e-2);
    // midway between eigenvalues the residual is far from zero
    if (idx + 1 < 6) {
      double Em = 0.5 * (E + bs.records[size_t(idx + 1)].E.real());
      auto [mp, mm] = secular_residuals(Em, pbs);
      CHECK(std::min(std::abs(mp), std::abs(mm)) >= 0.3);
    }
  }
}

TEST_CASE("secular pair factorizes into the break-up form") {
  oracle::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    double it = rng.uniform(-8.0, 8.0);
    double im = rng.uniform(-8.0, 8.0);
    for (double sgn : {1.0, -1.0}) {
      double lhs = sgn * std::sin(it) + std::cos(im);
      double rhs = 2.0 * std::sin(0.5 * (sgn * it - im + kPi / 2)) *
                   std::cos(0.5 * (sgn * it + im - kPi / 2));
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("break-up rule fires when a branch endpoint sits at e_c") {
  // tune L so that the first mode lands exactly on the branch endpoint:
  // mode_tau(1) = tau_c
  ScalingBranch br = integrate_branch(1, 1e-10);
  double L = std::pow(3.0 * kPi / (4.0 * br.tau_c), 0.4);
  ModelParams p{1, 1.0, L, 1.0};
  CHECK(std::abs(mode_tau(1, p) - br.tau_c) <= 1e-12);
  auto [r1, r2] = breakup_residuals(br.e_c * p.potential_scale(), p);
  CHECK(std::min(r1, r2) <= 0.1);
}

TEST_CASE("connection action matches the edge action at e_c") {
  ScalingBranch br = integrate_branch(1, 1e-10);
  ModelParams p{1, 1.0, 1.0, 1.0};
  double Ec = br.e_c * p.potential_scale();
  SecularData d = secular_data(Ec, p);
  Complex act = connection_action(Complex(Ec, 0), p);
  // same segment, opposite orientation; the positive-real normalization of
  // the connection branch absorbs the nominal sign flip
  CHECK(std::abs(act.real() - std::abs(d.action_edge)) <= 1e-6);
  CHECK(std::abs(act.imag()) <= 1e-6);
}

TEST_CASE("Maslov shift is pinned at pi/4") {
  for (int k = 1; k <= 5; ++k) {
    double zero_at = k * kPi - kPi / 4.0;
    CHECK(std::abs(complex_quantization_phase(zero_at)) <= 1e-12);
    CHECK(std::abs(complex_quantization_phase(zero_at + 0.3)) > 0.1);
  }
}

TEST_CASE("complex quantization: zeros sit at the Airy-zero actions (n=0)") {
  ModelParams p{0, 1.0, 3.0, 1.0};
  // WKB-estimated zeros make the phase vanish identically by construction
  for (int k = 1; k <= 2; ++k) {
    double s = airy_zero_wkb_estimate(k);
    double action = (2.0 / 3.0) * std::pow(s, 1.5);
    CHECK(std::abs(complex_quantization_phase(action)) <= 1e-12);
  }
  // at the refined-zero prediction the residual is small but nonzero
  double s1 = airy_zeros(1)[0];
  Complex em = Complex(0, 1) + std::polar(1.0, -kPi / 3.0) *
                                   (s1 / linear_kappa(p));
  CHECK(complex_quantization_residual(em * p.potential_scale(), p) <= 0.05);
}

TEST_CASE("complex quantization zeros track shooting pairs (n=1, L=3)") {
  ModelParams p{1, 1.0, 3.0, 1.0};
  auto spec = find_spectrum(p, 12);
  int tested = 0;
  ScalingBranch br = integrate_branch(1, 1e-10);
  for (auto& r : spec.records) {
    if (r.E.imag() == 0.0) continue;  // both pair members, each via its wall
    if (std::abs(r.E_mapped - br.e_c) <= 0.15 * br.e_c) continue;
    Complex act = connection_action(r.E, p);
    // distance of the action to the nearest quantized value, converted to
    // an equivalent energy offset through the local slope
    double dist = std::abs(std::remainder(act.real() + kPi / 4.0, kPi));
    Complex act2 = connection_action(r.E * 1.001, p);
    double slope = std::abs(act2.real() - act.real()) /
                   (0.001 * std::abs(r.E));
    CHECK(dist / slope <= 0.03 * std::abs(r.E));
    ++tested;
  }
  CHECK(tested >= 1);  // these parameters hold exactly one conjugate pair
}

TEST_CASE("conjugate pairs see mirrored connection actions") {
  ModelParams p{1, 1.0, 3.0, 1.0};
  auto spec = find_spectrum(p, 10);
  for (auto& r : spec.records) {
    if (r.E.imag() <= 0) continue;
    double res_up = complex_quantization_residual(r.E, p);
    double res_dn = complex_quantization_residual(std::conj(r.E), p);
    CHECK(std::abs(res_up - res_dn) <= 1e-8 * (1.0 + res_up));
  }
}
