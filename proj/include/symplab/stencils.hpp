#ifndef SYMPLAB_STENCILS_HPP_
#define SYMPLAB_STENCILS_HPP_

#include "symplab/common.hpp"

namespace symplab {

// Three-point finite-difference stencils, second order on arbitrary
// strictly increasing grids (central at interior nodes, one-sided at the
// ends), plus trapezoid quadrature weights. These are the discrete
// derivative and integral used throughout the library, so every module
// shares the same O(h^2) accuracy.

/// d/dt of a sampled function; `values` holds one sample per row.
inline Mat grid_derivative(const Vec& times, const Mat& values) {
  const int n = static_cast<int>(times.size());
  if (n < 3) throw Error("grid_derivative: need at least 3 nodes");
  if (values.rows() != n) throw Error("grid_derivative: shape mismatch");
  Mat d(n, values.cols());
  for (int k = 0; k < n; ++k) {
    int a, b, c;
    if (k == 0) {
      a = 0; b = 1; c = 2;
    } else if (k == n - 1) {
      a = n - 3; b = n - 2; c = n - 1;
    } else {
      a = k - 1; b = k; c = k + 1;
    }
    // Lagrange derivative weights at t_k for nodes (a, b, c);
    // exact for quadratics.
    const double ta = times[a], tb = times[b], tc = times[c], t = times[k];
    const double wa = (2 * t - tb - tc) / ((ta - tb) * (ta - tc));
    const double wb = (2 * t - ta - tc) / ((tb - ta) * (tb - tc));
    const double wc = (2 * t - ta - tb) / ((tc - ta) * (tc - tb));
    d.row(k) = wa * values.row(a) + wb * values.row(b) + wc * values.row(c);
  }
  return d;
}

inline Vec grid_derivative(const Vec& times, const Vec& values) {
  Mat m = values;
  return grid_derivative(times, m).col(0);
}

/// Trapezoid quadrature weights on an arbitrary grid.
inline Vec trapezoid_weights(const Vec& times) {
  const int n = static_cast<int>(times.size());
  if (n < 2) throw Error("trapezoid_weights: need at least 2 nodes");
  Vec w = Vec::Zero(n);
  for (int k = 0; k + 1 < n; ++k) {
    const double h = times[k + 1] - times[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

inline double trapezoid(const Vec& times, const Vec& values) {
  return trapezoid_weights(times).dot(values);
}

}  // namespace symplab

#endif  // SYMPLAB_STENCILS_HPP_
