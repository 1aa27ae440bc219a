#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "ptspectra/roots.hpp"
#include "support/oracles.hpp"

using namespace ptspectra;

namespace {

double match_sets(std::vector<Complex> a, std::vector<Complex> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (auto& x : a) {
    double best = 1e300;
    size_t bi = 0;
    for (size_t i = 0; i < b.size(); ++i)
      if (std::abs(x - b[i]) < best) {
        best = std::abs(x - b[i]);
        bi = i;
      }
    worst = std::max(worst, best);
    b.erase(b.begin() + long(bi));
  }
  return worst;
}

}  // namespace

TEST_CASE("poly_roots on y^2 + 1") {
  auto r = poly_roots({{1, 0}, {0, 0}, {1, 0}});
  CHECK(match_sets(r, {{0, 1}, {0, -1}}) < 1e-12);
}

TEST_CASE("poly_roots on y^3 = i (turning points of n=1 at E=1)") {
  // y^3 - i = 0
  auto r = poly_roots({{0, -1}, {0, 0}, {0, 0}, {1, 0}});
  std::vector<Complex> expect = {std::polar(1.0, kPi / 6),
                                 std::polar(1.0, 5 * kPi / 6),
                                 std::polar(1.0, -kPi / 2)};
  CHECK(match_sets(r, expect) < 1e-12);
}

TEST_CASE("poly_roots recovers a factored degree-7 polynomial") {
  oracle::Rng rng(42);
  std::vector<Complex> roots;
  for (int i = 0; i < 7; ++i) roots.push_back(rng.cbox(-2.0, 2.0));
  // multiply out (z - r_0)...(z - r_6)
  std::vector<Complex> c = {1.0};
  for (auto r : roots) {
    std::vector<Complex> nxt(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      nxt[i + 1] += c[i];
      nxt[i] -= r * c[i];
    }
    c = nxt;
  }
  auto found = poly_roots(c);
  CHECK(match_sets(found, roots) < 1e-9);
}

TEST_CASE("poly_roots rejects a zero leading coefficient") {
  CHECK_THROWS_AS(poly_roots({{1, 0}, {0, 0}, {0, 0}}),
                  DegenerateLeadingCoefficient);
  CHECK_THROWS_AS(poly_roots({{1, 0}}), DegenerateLeadingCoefficient);
}

TEST_CASE("poly_roots residuals stay below 1e-10 * max coeff") {
  oracle::Rng rng(7);
  for (int deg : {3, 9, 17}) {
    std::vector<Complex> c;
    for (int i = 0; i <= deg; ++i) c.push_back(rng.cbox(-1.0, 1.0));
    c.back() += Complex(1.5, 0);
    double cmax = 0;
    for (auto& v : c) cmax = std::max(cmax, std::abs(v));
    for (auto r : poly_roots(c)) {
      Complex p = c.back();
      for (int i = deg - 1; i >= 0; --i) p = p * r + c[size_t(i)];
      CHECK(std::abs(p) <= 1e-10 * cmax);
    }
  }
}

TEST_CASE("find_root_complex: z^2 - 2 from seed 1.2") {
  auto res = find_root_complex([](Complex z) { return z * z - 2.0; },
                               Complex(1.2, 0), 1e-14);
  CHECK(res.converged);
  CHECK(std::abs(res.root - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("find_root_complex: sin z from a complex seed reaches pi") {
  auto res = find_root_complex([](Complex z) { return std::sin(z); },
                               Complex(3.0, 0.1), 1e-13);
  CHECK(res.converged);
  CHECK(std::abs(res.root - kPi) < 1e-12);
}

TEST_CASE("find_root_complex flags non-convergence") {
  // no zero anywhere near; stays bounded away from 0
  auto res = find_root_complex(
      [](Complex z) { return std::exp(-z * z * 0.001) + 5.0; },
      Complex(0.3, 0.2), 1e-14, 30);
  CHECK_FALSE(res.converged);
  CHECK(std::abs(res.residual) > 1.0);
}

TEST_CASE("brent_root finds sqrt(2)") {
  double r = brent_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-13);
}
