#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace slabrt::detail {

struct BracketResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Root of an increasing function with f(lo) < 0 <= f(hi).
///
/// When a derivative is supplied, Newton steps are taken whenever they land
/// strictly inside the current bracket; otherwise the bracket is bisected.
/// Stops once hi - lo <= tol or f vanishes exactly.
struct IncreasingRootFinder {
  double tol = 1e-10;
  int max_iterations = 200;

  BracketResult solve(const std::function<double(double)>& f, double lo, double hi,
                      const std::function<std::optional<double>(double, double)>& newton_step =
                          nullptr) const {
    BracketResult r;
    r.lo = lo;
    r.hi = hi;
    double x = 0.5 * (lo + hi);
    for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
      const double fx = f(x);
      if (fx < 0.0) {
        r.lo = x;
      } else {
        r.hi = x;
      }
      if (fx == 0.0 || r.hi - r.lo <= tol) {
        r.root = fx == 0.0 ? x : 0.5 * (r.lo + r.hi);
        r.converged = true;
        return r;
      }
      std::optional<double> next;
      if (newton_step) {
        if (auto step = newton_step(x, fx)) {
          const double candidate = x - *step;
          if (std::isfinite(candidate) && candidate > r.lo && candidate < r.hi) next = candidate;
        }
      }
      if (next) {
        // A Newton iterate that barely moves is as good as converged: probe
        // both sides at tolerance distance to close the bracket.
        if (std::abs(*next - x) <= 0.5 * tol) {
          const double left = std::max(r.lo, *next - tol);
          const double right = std::min(r.hi, *next + tol);
          if (f(left) < 0.0) r.lo = left;
          if (f(right) >= 0.0) r.hi = right;
          x = 0.5 * (r.lo + r.hi);
        } else {
          x = *next;
        }
      } else {
        x = 0.5 * (r.lo + r.hi);
      }
    }
    r.root = 0.5 * (r.lo + r.hi);
    return r;
  }
};

}  // namespace slabrt::detail
