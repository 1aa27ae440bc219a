#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <cstdio>

#include "ptspectra/path.hpp"
#include "support/oracles.hpp"

using namespace ptspectra;

namespace {

// oracle evaluation of the continued sqrt at an arbitrary point: align the
// principal sqrt with the nearest dense-march sample
Complex oracle_value_at(
    const std::vector<std::pair<Complex, Complex>>& march, Complex y,
    const Qfunction& q) {
  double best = 1e300;
  Complex ref = march.front().second;
  for (auto& s : march)
    if (std::abs(s.first - y) < best) {
      best = std::abs(s.first - y);
      ref = s.second;
    }
  return oracle::align(std::sqrt(q(y)), ref);
}

}  // namespace

TEST_CASE("sqrt_q_continued matches the principal branch on a benign path") {
  Qfunction q{Complex(1, 0), 0};
  auto path = make_path({Complex(0, 0), Complex(0.5, 0)}, q);
  for (auto& s : sqrt_q_continued(path, q)) {
    Complex expect = std::sqrt(Complex(1, 0) + Complex(0, 1) * s.y);
    CHECK(std::abs(s.w - expect) < 1e-13);
    CHECK(std::abs(s.w * s.w - q(s.y)) <= 1e-12 * std::abs(q(s.y)));
  }
}

TEST_CASE("encircling a simple turning point flips the branch") {
  Qfunction q{Complex(1, 0), 0};  // single root at y = i
  Complex c(0, 1);
  double r = 0.4;
  std::vector<Complex> loop = {c + r, c + Complex(0, r), c - r,
                               c - Complex(0, r), c + r};
  auto path = make_path(loop, q);
  auto samples = sqrt_q_continued(path, q);
  CHECK(std::abs(samples.back().w + samples.front().w) < 1e-10);
  CHECK(std::abs(samples.back().y - samples.front().y) < 1e-15);
}

TEST_CASE("continuation agrees with a dense marching oracle (n=1, E=i)") {
  Qfunction q{Complex(0, 1), 1};
  std::vector<Complex> verts = {Complex(-1, 0), Complex(-1, 1)};
  auto path = make_path(verts, q);
  auto march = oracle::march_sqrt(q, verts, path.branch_seed, 100000);
  for (auto& s : sqrt_q_continued(path, q)) {
    Complex expect = oracle_value_at(march, s.y, q);
    CHECK(std::abs(s.w - expect) < 1e-10);
  }
}

TEST_CASE("constant-Q hook integrates to the path displacement") {
  auto qconst = [](Complex) { return Complex(1, 0); };
  ComplexPath p;
  p.vertices = {Complex(0, 0), Complex(0.7, 0.2), Complex(1, 1)};
  p.branch_seed = Complex(1, 0);
  Complex I = action_integral(p, qconst);
  CHECK(std::abs(I - Complex(1, 1)) < 1e-13);
}

TEST_CASE("action from the turning point to y=-1 (n=0, E=1)") {
  Qfunction q{Complex(1, 0), 0};
  Complex tp(0, 1);
  Complex target(-1, 0);
  Complex dir = (target - tp) / std::abs(target - tp);
  Complex start = tp + 2e-6 * dir;
  ComplexPath p;
  p.vertices = {start, target};
  p.branch_seed = std::sqrt(q(start));
  Complex I = action_integral(p, q);
  if (I.real() < 0) {  // physical sheet has positive running action
    p.branch_seed = -p.branch_seed;
    I = action_integral(p, q);
  }
  CHECK(I.real() > 0);
  Complex ref = oracle::graded_action(q, start, target, p.branch_seed, 400000);
  CHECK(std::abs(I.imag() - ref.imag()) < 1e-9);
  CHECK(std::abs(I - ref) < 1e-9);
}

TEST_CASE("critical real configuration has a real connection action") {
  double ec = 1.0 / std::sqrt(3.0);
  Qfunction q{Complex(ec, 0), 0};
  Complex tp(0, ec);
  Complex target(-1, 0);
  Complex dir = (target - tp) / std::abs(target - tp);
  Complex start = tp + 2e-6 * dir;
  ComplexPath p;
  p.vertices = {start, target};
  p.branch_seed = std::sqrt(q(start));
  Complex I = action_integral(p, q);
  CHECK(std::abs(I.imag()) < 1e-6);
}

TEST_CASE("reversing a path negates the action exactly") {
  oracle::Rng rng(123);
  int done = 0;
  while (done < 100) {
    int n = int(rng.next() % 3);
    Complex em = rng.cbox(-1.5, 1.5);
    if (std::abs(em) < 0.2) continue;
    Qfunction q{em, n};
    std::vector<Complex> verts;
    int nv = 2 + int(rng.next() % 3);
    for (int i = 0; i < nv; ++i) verts.push_back(rng.cbox(-2.0, 2.0));
    bool ok = true;
    for (size_t i = 0; ok && i + 1 < verts.size(); ++i) {
      if (std::abs(verts[i] - verts[i + 1]) < 1e-3) ok = false;
      for (Complex r : q.roots())
        if (detail::point_segment_distance(r, verts[i], verts[i + 1]) < 0.05)
          ok = false;
    }
    if (!ok) continue;
    ComplexPath p = make_path(verts, q);
    Complex fwd = action_integral(p, q);
    ComplexPath rev = reverse_path(p, q);
    Complex bwd = action_integral(rev, q);
    REQUIRE(bwd == -fwd);  // bitwise, by symmetric node placement
    ++done;
  }
}

TEST_CASE("homotopic paths give the same integral") {
  Qfunction q{Complex(1.3, 0.4), 1};
  // both paths run well below the root ring |y| = |E|^(1/3)
  std::vector<Complex> a = {Complex(-2, -2), Complex(0, -1.8), Complex(2, -2)};
  std::vector<Complex> b = {Complex(-2, -2), Complex(-0.5, -2.3),
                            Complex(0.8, -1.9), Complex(2, -2)};
  ComplexPath pa = make_path(a, q);
  ComplexPath pb = make_path(b, q);
  // same seed sheet at the common start
  pb.branch_seed = pa.branch_seed;
  CHECK(std::abs(action_integral(pa, q) - action_integral(pb, q)) < 1e-8);
}

TEST_CASE("a path through a turning point is rejected") {
  Qfunction q{Complex(1, 0), 0};  // root at i
  CHECK_THROWS_AS(
      make_path({Complex(-0.5, 1), Complex(0.5, 1)}, q),
      TurningPointOnPath);
  CHECK_THROWS_AS(make_path({Complex(0, 1), Complex(1, 1)}, q),
                  TurningPointOnPath);
}

TEST_CASE("unresolvable phase jump raises BranchAmbiguity") {
  // hidden phase discontinuity: no amount of subdivision certifies
  // continuity across it
  const double x0 = 0.5 / std::sqrt(2.0);
  auto wild = [=](Complex y) {
    return std::polar(1.0, y.real() > x0 ? kPi + 0.6 : 0.0);
  };
  ComplexPath p;
  p.vertices = {Complex(0, 0), Complex(1, 0)};
  p.branch_seed = Complex(1, 0);
  CHECK_THROWS_AS(sqrt_q_continued(p, wild), BranchAmbiguity);
}

TEST_CASE("degenerate path inputs are rejected") {
  Qfunction q{Complex(1, 0), 0};
  CHECK_THROWS_AS(make_path({Complex(0, 0)}, q), std::invalid_argument);
  CHECK_THROWS_AS(make_path({Complex(0, 0), Complex(0, 0)}, q),
                  std::invalid_argument);
}
