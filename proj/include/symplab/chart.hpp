#ifndef SYMPLAB_CHART_HPP_
#define SYMPLAB_CHART_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "symplab/common.hpp"

namespace symplab {

/// Admissible range of one chart coordinate. Periodic coordinates are
/// stored in their fundamental interval [lo, hi); bounded non-periodic
/// coordinates may carry a safety margin (see ChartDomain::margin).
struct CoordinateRange {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool periodic = false;

  double period() const { return hi - lo; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

enum class Containment {
  interior,  ///< margin-shrunk domain, required for dynamics (omega inverted)
  closure    ///< closed coordinate box, sufficient for 2-form quadrature
};

/// Box-with-identifications chart domain, optionally refined by a custom
/// predicate (e.g. the unit disk of the sphere xy-chart).
struct ChartDomain {
  std::vector<CoordinateRange> coords;
  /// Margin stripped from each bounded non-periodic coordinate for
  /// interior containment. Dynamics must stay in the interior; quadrature
  /// may use the closure (the sphere cap integrates up to the pole).
  double margin = 0.0;
  /// Optional extra predicate; receives the point and the effective margin.
  std::function<bool(const Vec&, double)> predicate;

  int dim() const { return static_cast<int>(coords.size()); }

  bool contains(const Vec& x, Containment c = Containment::interior) const {
    const double m = (c == Containment::interior) ? margin : 0.0;
    for (int i = 0; i < dim(); ++i) {
      const auto& r = coords[i];
      if (r.periodic) continue;  // periodic coordinates always admissible
      const double lo = r.bounded() ? r.lo + m : r.lo;
      const double hi = r.bounded() ? r.hi - m : r.hi;
      if (!(x[i] >= lo && x[i] <= hi)) return false;
    }
    if (predicate && !predicate(x, m)) return false;
    return true;
  }

  /// Wraps periodic coordinates of `x` into their fundamental intervals.
  /// Returns the wrapped point and the per-coordinate winding increments
  /// that were removed.
  std::pair<Vec, Eigen::VectorXi> wrap(const Vec& x) const {
    Vec w = x;
    Eigen::VectorXi k = Eigen::VectorXi::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
      if (!coords[i].periodic) continue;
      auto [val, n] = wrap_periodic(x[i], coords[i].lo, coords[i].period());
      w[i] = val;
      k[i] = n;
    }
    return {w, k};
  }

  /// Reconstructs unwrapped coordinates from wrapped values and windings.
  Vec unwrap(const Vec& wrapped, const Eigen::VectorXi& windings) const {
    Vec x = wrapped;
    for (int i = 0; i < dim(); ++i) {
      if (coords[i].periodic) x[i] += windings[i] * coords[i].period();
    }
    return x;
  }

  static ChartDomain unbounded(int dim) {
    ChartDomain d;
    d.coords.resize(dim);
    return d;
  }
};

}  // namespace symplab

#endif  // SYMPLAB_CHART_HPP_
