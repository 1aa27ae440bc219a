#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ptspectra/errors.hpp"
#include "ptspectra/model.hpp"

namespace ptspectra {

// Oriented polyline in the dimensionless coordinate plane, together with the
// value of sqrt(Q) at the first vertex. The seed fixes the sheet; everything
// downstream continues the square root by phase proximity, so no explicit
// branch cuts are ever placed.
struct ComplexPath {
  std::vector<Complex> vertices;
  Complex branch_seed{};
};

struct SqrtSample {
  Complex y;  // sample point on the path
  Complex w;  // branch-continued sqrt(Q) there
};

template <class Q>
concept QLike = requires(const Q& q, Complex y) {
  { q(y) } -> std::convertible_to<Complex>;
};

template <class Q>
concept QWithRoots = QLike<Q> && requires(const Q& q) {
  { q.roots() } -> std::convertible_to<std::vector<Complex>>;
};

namespace detail {

inline double phase_jump(Complex w1, Complex w2) {
  Complex r = w2 * std::conj(w1);
  return std::abs(std::atan2(r.imag(), r.real()));
}

inline Complex align_sign(Complex candidate, Complex reference) {
  double dot = candidate.real() * reference.real() +
               candidate.imag() * reference.imag();
  return dot >= 0.0 ? candidate : -candidate;
}

inline double point_segment_distance(Complex r, Complex a, Complex b) {
  Complex d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(r - a);
  double t = ((r - a).real() * d.real() + (r - a).imag() * d.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(r - (a + t * d));
}

// Phase-continued sqrt(Q) along one straight segment, parameterized as
// p(u) = m + u h with u in [-1, 1]. The skeleton keeps adjacent phase jumps
// below pi/4 so that sign alignment of interior evaluations is unambiguous.
template <class Q>
class SegmentBranch {
 public:
  static constexpr double kMaxJump = kPi / 4.0;
  static constexpr int kMaxDepth = 40;

  SegmentBranch(const Q& q, Complex a, Complex b, Complex w_start)
      : m_(0.5 * (a + b)), h_(0.5 * (b - a)), q_(&q) {
    us_.push_back(-1.0);
    ws_.push_back(w_start);
    constexpr int kInitial = 16;
    for (int j = 1; j <= kInitial; ++j) {
      double ub = -1.0 + 2.0 * j / kInitial;
      grow(us_.back(), ws_.back(), ub, 0);
    }
  }

  Complex point(double u) const { return m_ + u * h_; }
  Complex halfstep() const { return h_; }
  Complex end_value() const { return ws_.back(); }
  const std::vector<double>& us() const { return us_; }
  const std::vector<Complex>& ws() const { return ws_; }

  // Section value of sqrt(Q) at parameter u.
  Complex value_at(double u) const {
    Complex p = std::sqrt((*q_)(point(u)));
    size_t hi = size_t(std::lower_bound(us_.begin(), us_.end(), u) -
                       us_.begin());
    if (hi == 0) return align_sign(p, ws_.front());
    if (hi >= us_.size()) return align_sign(p, ws_.back());
    size_t lo = hi - 1;
    double frac = (u - us_[lo]) / (us_[hi] - us_[lo]);
    Complex r = ws_[hi] * std::conj(ws_[lo]);
    double dth = std::atan2(r.imag(), r.real());
    double th = std::arg(ws_[lo]) + frac * dth;
    return align_sign(p, std::polar(1.0, th));
  }

 private:
  void grow(double ua, Complex wa, double ub, int depth) {
    Complex wb = align_sign(std::sqrt((*q_)(point(ub))), wa);
    double jump = phase_jump(wa, wb);
    if (jump < kMaxJump) {
      us_.push_back(ub);
      ws_.push_back(wb);
      return;
    }
    if (depth >= kMaxDepth)
      // sign alignment caps the apparent jump at pi/2, so an unresolved
      // jump at maximal depth means continuity cannot be certified
      throw BranchAmbiguity(
          "sqrt(Q) phase jump unresolved by adaptive subdivision");
    double um = 0.5 * (ua + ub);
    grow(ua, wa, um, depth + 1);
    grow(um, ws_.back(), ub, depth + 1);
  }

  Complex m_, h_;
  const Q* q_;
  std::vector<double> us_;
  std::vector<Complex> ws_;
};

template <class Q>
void check_path_preconditions(const ComplexPath& path, const Q& q) {
  if (path.vertices.size() < 2)
    throw std::invalid_argument("ComplexPath needs at least 2 vertices");
  for (size_t i = 0; i + 1 < path.vertices.size(); ++i)
    if (path.vertices[i] == path.vertices[i + 1])
      throw std::invalid_argument("ComplexPath: repeated consecutive vertex");
  Complex q0 = q(path.vertices.front());
  double mag = std::abs(path.branch_seed * path.branch_seed - q0);
  if (mag > 1e-9 * (std::abs(q0) + 1e-30) + 1e-28)
    throw std::invalid_argument("ComplexPath: branch seed is not a sqrt of Q");
  if constexpr (QWithRoots<Q>) {
    for (Complex r : q.roots())
      for (size_t i = 0; i + 1 < path.vertices.size(); ++i)
        if (point_segment_distance(r, path.vertices[i],
                                   path.vertices[i + 1]) < kTolTurningPoint)
          throw TurningPointOnPath(
              "path passes within tol_tp of a turning point");
  }
}

// Kronrod 15 / Gauss 7 nodes and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                                  0.381830050505119, 0.417959183673469};

template <class Q>
struct GkInterval {
  Complex integral;
  double err;
};

// One G7/K15 panel on the sub-interval u in [c - w, c + w]. Nodes are placed
// and summed pairwise-symmetrically so that reversing the segment negates
// the result exactly in floating point.
template <class Q>
GkInterval<Q> gk15_panel(const SegmentBranch<Q>& seg, double c, double w) {
  Complex s15 = 0.0, s7 = 0.0;
  for (int i = 0; i < 7; ++i) {
    double up = c + w * kXgk[i];
    double um = c + w * (-kXgk[i]);
    Complex pair = seg.value_at(up) + seg.value_at(um);
    s15 += kWgk[i] * pair;
    if (i % 2 == 1) s7 += kWg[i / 2] * pair;
  }
  Complex fc = seg.value_at(c);
  s15 += kWgk[7] * fc;
  s7 += kWg[3] * fc;
  Complex hw = seg.halfstep() * w;
  return {hw * s15, std::abs(hw * (s15 - s7))};
}

template <class Q>
Complex gk_adaptive(const SegmentBranch<Q>& seg, double c, double w,
                    double tol_share, int depth) {
  GkInterval<Q> r = gk15_panel(seg, c, w);
  if (r.err <= tol_share * w || w <= 4e-16) return r.integral;
  if (depth >= 48)
    throw QuadratureFailure(
        "action_integral: tolerance not met within max subdivisions");
  double w2 = 0.5 * w;
  Complex left = gk_adaptive(seg, c - w2, w2, tol_share, depth + 1);
  Complex right = gk_adaptive(seg, c + w2, w2, tol_share, depth + 1);
  return left + right;
}

}  // namespace detail

// Build a path with the principal-branch seed at the first vertex.
template <QLike Q>
ComplexPath make_path(std::vector<Complex> vertices, const Q& q) {
  ComplexPath p{std::move(vertices), 0.0};
  if (p.vertices.empty())
    throw std::invalid_argument("ComplexPath needs at least 2 vertices");
  p.branch_seed = std::sqrt(q(p.vertices.front()));
  detail::check_path_preconditions(p, q);
  return p;
}

// sqrt(Q) sampled branch-continuously along the path; adjacent samples are
// guaranteed to differ in phase by less than pi/2.
template <QLike Q>
std::vector<SqrtSample> sqrt_q_continued(const ComplexPath& path, const Q& q) {
  detail::check_path_preconditions(path, q);
  std::vector<SqrtSample> out;
  Complex w = path.branch_seed;
  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    detail::SegmentBranch<Q> seg(q, path.vertices[s], path.vertices[s + 1], w);
    size_t start = (s == 0) ? 0 : 1;  // shared vertex appears once
    for (size_t j = start; j < seg.us().size(); ++j)
      out.push_back({seg.point(seg.us()[j]), seg.ws()[j]});
    w = seg.end_value();
  }
  return out;
}

struct PathAction {
  Complex value;     // integral of sqrt(Q) dy along the path
  Complex sqrt_end;  // transported sqrt(Q) at the final vertex
};

template <QLike Q>
PathAction action_integral_full(const ComplexPath& path, const Q& q,
                                double tol = kTolQuadrature) {
  detail::check_path_preconditions(path, q);
  std::vector<Complex> per_segment;
  Complex w = path.branch_seed;
  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    detail::SegmentBranch<Q> seg(q, path.vertices[s], path.vertices[s + 1], w);
    per_segment.push_back(detail::gk_adaptive(seg, 0.0, 1.0, tol, 0));
    w = seg.end_value();
  }
  // palindromic pairwise fold: keeps the total exactly antisymmetric under
  // path reversal
  Complex total = 0.0;
  size_t k = per_segment.size();
  for (size_t i = 0; i < k / 2; ++i)
    total += per_segment[i] + per_segment[k - 1 - i];
  if (k % 2 == 1) total += per_segment[k / 2];
  return {total, w};
}

// Integral of the branch-continued sqrt(Q) along the path (adaptive
// Gauss-Kronrod per segment, absolute tolerance).
template <QLike Q>
Complex action_integral(const ComplexPath& path, const Q& q,
                        double tol = kTolQuadrature) {
  return action_integral_full(path, q, tol).value;
}

// Reversed path carrying the transported branch (so that the action integral
// over it is exactly the negative of the forward one).
template <QLike Q>
ComplexPath reverse_path(const ComplexPath& path, const Q& q) {
  detail::check_path_preconditions(path, q);
  Complex w = path.branch_seed;
  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    detail::SegmentBranch<Q> seg(q, path.vertices[s], path.vertices[s + 1], w);
    w = seg.end_value();
  }
  ComplexPath rev;
  rev.vertices.assign(path.vertices.rbegin(), path.vertices.rend());
  rev.branch_seed = w;
  return rev;
}

}  // namespace ptspectra
