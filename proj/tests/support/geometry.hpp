#pragma once

// Polyline geometry helpers shared by the Stokes tests and the acceptance
// suite: point-to-polyline distance and the clipped mirror Hausdorff
// distance between two Stokes graphs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ptspectra/path.hpp"
#include "ptspectra/stokes.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline Complex pt_mirror(Complex y) { return -std::conj(y); }

inline std::vector<Complex> clip_to_disk(const std::vector<Complex>& pl,
                                         double r) {
  std::vector<Complex> out;
  for (Complex y : pl)
    if (std::abs(y) <= r) out.push_back(y);
  return out;
}

inline double dist_to_polyline(Complex p, const std::vector<Complex>& pl) {
  double best = 1e300;
  for (size_t i = 0; i + 1 < pl.size(); ++i)
    best = std::min(best, ptspectra::detail::point_segment_distance(
                              p, pl[i], pl[i + 1]));
  if (pl.size() == 1) best = std::abs(p - pl[0]);
  return best;
}

inline double hausdorff_one_sided(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b) {
  double worst = 0;
  for (Complex p : a) worst = std::max(worst, dist_to_polyline(p, b));
  return worst;
}

// symmetric Hausdorff between graph g and the PT mirror of graph gm, with
// both clipped to the tracing window
inline double graph_mirror_hausdorff(const ptspectra::StokesGraph& g,
                                     const ptspectra::StokesGraph& gm,
                                     double clip) {
  double worst = 0;
  for (const auto& l : g.lines) {
    auto a = clip_to_disk(l.polyline, clip);
    if (a.empty()) continue;
    for (auto& p : a) p = pt_mirror(p);
    double best = 1e300;
    for (const auto& lm : gm.lines) {
      auto b = clip_to_disk(lm.polyline, clip);
      if (b.empty()) continue;
      best = std::min(best, std::max(hausdorff_one_sided(a, b),
                                     hausdorff_one_sided(b, a)));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace oracle
