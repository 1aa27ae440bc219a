#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "ptspectra/airy.hpp"
#include "ptspectra/scaling_graph.hpp"

using namespace ptspectra;

namespace {

// closed-form n=0 branch: i + e^{-i pi/3} (3 tau / 2)^{2/3}
Complex closed_branch_n0(double tau) {
  return Complex(0, 1) +
         std::polar(1.0, -kPi / 3.0) * std::pow(1.5 * tau, 2.0 / 3.0);
}

const double kTauCExact = std::pow(2.0, 2.5) * std::pow(3.0, -1.75);

}  // namespace

TEST_CASE("ode_rhs reproduces the closed-form n=0 slope") {
  for (double tau : {1e-4, 1e-2, 0.3, 0.7}) {
    Complex e = closed_branch_n0(tau);
    Complex got = ode_rhs(tau, e, 0);
    Complex expect =
        std::polar(1.0, -kPi / 3.0) * std::pow(1.5 * tau, -1.0 / 3.0);
    CHECK(std::abs(got - expect) <= 1e-8 * std::abs(expect));
  }
}

TEST_CASE("ode_rhs is dimensionless-consistent and real for real E >> 1") {
  Complex e(1e8, 0);
  for (int n : {0, 1, 2}) {
    Complex r = ode_rhs(1.0, e, n);
    CHECK(std::abs(r.imag()) <= 1e-8 * std::abs(r));
  }
}

TEST_CASE("puiseux_seed matches the closed form and its stated geometry") {
  double dt = 1e-4;
  CHECK(std::abs(puiseux_seed(0, dt) - closed_branch_n0(dt)) < 1e-15);
  for (int n = 0; n <= 5; ++n) {
    Complex anchor(0, n % 2 == 0 ? 1.0 : -1.0);
    Complex s = puiseux_seed(n, dt);
    double amp = std::pow(1.5 * (2 * n + 1) * dt, 2.0 / 3.0);
    CHECK(std::abs(std::abs(s - anchor) - amp) < 1e-15);
    CHECK(std::abs(s - anchor) < 0.1);  // seed hugs its endpoint
  }
  CHECK_THROWS_AS(puiseux_seed(0, 1e-2), std::invalid_argument);
}

TEST_CASE("integrate_branch(0) reproduces the closed form") {
  ScalingBranch br = integrate_branch(0, 1e-9);
  CHECK(std::abs(br.tau_c - kTauCExact) < 1e-6);
  CHECK(std::abs(br.e_c - 1.0 / std::sqrt(3.0)) < 1e-6);
  double sup = 0;
  for (auto& s : br.samples)
    sup = std::max(sup, std::abs(s.emapped - closed_branch_n0(s.tau)));
  CHECK(sup <= 1e-6);
  CHECK(br.im_monotone);
  CHECK(br.samples.front().tau == kPuiseuxDeltaTau);
  CHECK(br.samples.size() >= 400);
}

TEST_CASE("n=0 branch samples are collinear from i to 1/sqrt(3)") {
  ScalingBranch br = integrate_branch(0, 1e-10);
  Complex a(0, 1), b(1.0 / std::sqrt(3.0), 0);
  Complex d = (b - a) / std::abs(b - a);
  for (auto& s : br.samples) {
    Complex rel = (s.emapped - a) / d;
    CHECK(std::abs(rel.imag()) <= 1e-7);  // ODE-tolerance collinearity
  }
}

TEST_CASE("reality residual: quadrature route agrees with the ODE route") {
  ScalingBranch b0 = integrate_branch(0, 1e-10);
  CHECK(reality_residual(b0, b0.samples.size() / 2) <= 1e-6);
  CHECK(reality_residual(b0, 0) <= 1e-5);

  ScalingBranch b1 = integrate_branch(1, 1e-10);
  CHECK(reality_residual(b1, b1.samples.size() / 2) <= 1e-5);
}

TEST_CASE("ODE/quadrature duality across n = 0..5") {
  for (int n = 0; n <= 5; ++n) {
    ScalingBranch br = integrate_branch(n, 1e-10);
    for (int i = 0; i < 20; ++i) {
      size_t idx = 1 + size_t((br.samples.size() - 2) * i / 19);
      CHECK(reality_residual(br, idx) <= 1e-5);
    }
  }
}

TEST_CASE("conjugate branch satisfies the conjugated ODE") {
  ScalingBranch br = integrate_branch(1, 1e-10);
  for (size_t i = 10; i < br.samples.size(); i += 40) {
    auto& s = br.samples[i];
    // d/dtau conj(E) must equal conj(dE/dtau), with the square root taken on
    // the mirrored sheet
    Complex lhs = std::conj(s.slope);
    Complex conj_e = std::conj(s.emapped);
    Complex den = 0.5 * (2 * br.n + 3) * s.tau -
                  std::sqrt(conj_e + Complex(0, br.n % 2 == 0 ? 1.0 : -1.0));
    Complex rhs = double(2 * br.n + 1) * conj_e / den;
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
  }
}

TEST_CASE("branch leaves its endpoint with the 2/3 power law") {
  for (int n : {0, 1, 3}) {
    Complex anchor(0, n % 2 == 0 ? 1.0 : -1.0);
    auto dist_at = [&](double tau) {
      auto rhs = [n](double t, const RkState<1>& y) {
        return RkState<1>{ode_rhs(t, y[0], n)};
      };
      RkOptions opt;
      opt.rel_tol = opt.abs_tol = 1e-12;
      opt.initial_step = kPuiseuxDeltaTau;
      auto traj = rk_adaptive<1>(rhs, kPuiseuxDeltaTau, tau,
                                 {puiseux_seed(n, kPuiseuxDeltaTau)}, opt);
      return std::abs(traj.y_end[0] - anchor);
    };
    double d1 = dist_at(1e-5), d2 = dist_at(1e-4);
    double expo = std::log(d2 / d1) / std::log(10.0);
    CHECK(std::abs(expo - 2.0 / 3.0) <= 0.01 * (2.0 / 3.0));
    double coeff = d2 / std::pow(1e-4, 2.0 / 3.0);
    CHECK(std::abs(coeff - std::pow(1.5 * (2 * n + 1), 2.0 / 3.0)) <=
          0.01 * coeff);
  }
}

TEST_CASE("mode_tau reproduces the n=0 Airy-zero placement") {
  ModelParams p{0, 1.0, 3.0, 1.0};
  ScalingBranch br = integrate_branch(0, 1e-10);
  double kappa = std::pow(p.hbar, -2.0 / 3.0) * std::pow(p.g, 1.0 / 3.0) * p.L;
  for (int j = 1; j <= 3; ++j) {
    double tau_j = mode_tau(j, p);
    // tau and the WKB zero estimate are linked by tau = (2/3) s^{3/2} / sqrt(g L^3)
    double s_wkb = airy_zero_wkb_estimate(j);
    double tau_from_s = (2.0 / 3.0) * p.hbar * std::pow(s_wkb, 1.5) /
                        std::sqrt(p.g * std::pow(p.L, 3));
    CHECK(std::abs(tau_j - tau_from_s) <= 1e-12 * tau_j);
    if (tau_j < br.tau_c) {
      Complex pred = br.eval(tau_j);
      Complex ssh = Complex(0, 1) +
                    std::polar(1.0, -kPi / 3.0) * (s_wkb / kappa);
      CHECK(std::abs(pred - ssh) <= 1e-5);
    }
  }
}

TEST_CASE("modes densify at the endpoint as L grows") {
  ScalingBranch br = integrate_branch(1, 1e-9);
  double prev_tau = 1e300;
  int prev_count = 0;
  for (double L : {2.0, 4.0, 8.0, 16.0}) {
    ModelParams p{1, 1.0, L, 1.0};
    double t1 = mode_tau(1, p);
    CHECK(t1 < prev_tau);
    prev_tau = t1;
    int count = 0;
    for (int j = 1; j < 4000; ++j)
      if (mode_tau(j, p, br).on_complex_branch) ++count;
    CHECK(count >= prev_count);
    prev_count = count;
  }
  // tau -> 0 means emapped -> (-1)^n i
  ModelParams big{1, 1.0, 64.0, 1.0};
  Complex e1 = br.eval(mode_tau(1, big));
  CHECK(std::abs(e1 - Complex(0, -1)) < 0.05);
}

TEST_CASE("graph projection classifies branch and axis points") {
  ScalingBranch br = integrate_branch(1, 1e-9);
  Complex on_branch = br.eval(0.5 * br.tau_c);
  auto pr = project_onto_graph(br, on_branch);
  CHECK(pr.distance < 1e-9);
  CHECK_FALSE(pr.on_real_axis);
  auto pc = project_onto_graph(br, std::conj(on_branch));
  CHECK(pc.distance < 1e-9);
  auto pa = project_onto_graph(br, Complex(3.0, 1e-4));
  CHECK(pa.on_real_axis);
  CHECK(pa.distance <= 1e-4 + 1e-12);
}
