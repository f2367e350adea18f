#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "tailscale/errors.hpp"

namespace tailscale::detail {

struct RootResult {
  double x;
  double value;
  int iterations;
  double lo;
  double hi;
};

// Root of an increasing function g on (lo, sup) with g(lo) < 0. gd(x) returns
// {g(x), g'(x)}. The upper bracket starts at min(guess, 0.99 sup) and grows
// geometrically toward sup.
template <class F>
RootResult increasing_root(F&& gd, double lo, double guess, double sup, double scale,
                           double rtol = 1e-15) {
  const double inf = std::numeric_limits<double>::infinity();
  double hi = guess;
  if (std::isfinite(sup)) hi = std::min(hi, lo + 0.99 * (sup - lo));
  if (!(hi > lo)) hi = std::isfinite(sup) ? lo + 0.5 * (sup - lo) : lo + 1.0;

  auto [ghi, dhi] = gd(hi);
  int expansions = 0;
  while (!(ghi >= 0.0)) {
    if (++expansions > 2000) throw NoSolutionError("no sign change on the admissible bracket");
    lo = hi;
    if (std::isfinite(sup)) {
      hi = hi + 0.5 * (sup - hi);
      if (!(hi > lo) || !(hi < sup))
        throw NoSolutionError("derivative stays below target on the admissible bracket");
    } else {
      hi = hi * 2.0 + 1.0;
      if (!(hi < inf)) throw NoSolutionError("derivative stays below target on (0, inf)");
    }
    std::tie(ghi, dhi) = gd(hi);
  }

  // Newton with bisection whenever the step leaves the bracket or fails to halve it
  // (steep exponential branches make plain Newton crawl).
  double x = hi;
  double step_old = hi - lo;
  int it = 0;
  double gx = 0.0;
  for (; it < 1000; ++it) {
    auto [g, d] = gd(x);
    gx = g;
    if (g == 0.0) break;
    if (g < 0.0) lo = x; else hi = x;
    if (std::abs(g) <= rtol * scale) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    double next = x - g / d;
    const double step = std::abs(next - x);
    if (!(next > lo && next < hi) || !(2.0 * step <= step_old)) {
      next = 0.5 * (lo + hi);
      step_old = hi - lo;
    } else {
      step_old = step;
    }
    if (next == x) break;
    x = next;
  }
  return {x, gx, it + 1, lo, hi};
}

}  // namespace tailscale::detail
