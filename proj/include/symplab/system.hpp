#ifndef SYMPLAB_SYSTEM_HPP_
#define SYMPLAB_SYSTEM_HPP_

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "symplab/chart.hpp"
#include "symplab/common.hpp"

namespace symplab {

/// A Hamiltonian system on a single coordinate chart: the symplectic form
/// as a matrix field omega_{mu nu}(x), the Hamiltonian and its gradient,
/// and the chart domain. Values are immutable after construction; all
/// operations on them are pure functions.
///
/// Conventions: coordinates of canonical systems are ordered
/// (q^1..q^n, p_1..p_n), in which the standard form dp_i ^ dq^i has the
/// constant matrix [[0, -I], [I, 0]]. The flow is xdot = omega^{mu nu} dH,
/// with omega^{mu nu} the matrix inverse of omega_{mu nu}.
struct SymplecticSystem {
  std::string name;
  int dim = 0;
  std::function<Mat(const Vec&)> omega;
  std::function<double(const Vec&)> hamiltonian;
  std::function<Vec(const Vec&)> grad_h;
  /// Optional analytic Hessian of H; finite differences of grad_h otherwise.
  std::function<Mat(const Vec&)> hess_h;
  ChartDomain chart;
  /// True only for the standard structure on R^{2n}; enables the line
  /// actions and the residual-norm machinery.
  bool canonical = false;
  /// Fundamental-domain box of a compact 2-cycle, when the manifold has
  /// one (sphere, torus); empty for non-compact phase spaces.
  std::optional<std::array<std::array<double, 2>, 2>> cycle_domain;

  int dof() const { return dim / 2; }
};

using SystemPtr = std::shared_ptr<const SymplecticSystem>;

/// Hessian of H at x: analytic when supplied, otherwise central
/// differences of the gradient (symmetrized).
inline Mat hamiltonian_hessian(const SymplecticSystem& sys, const Vec& x,
                               double step = 1e-6) {
  if (sys.hess_h) return sys.hess_h(x);
  const int d = sys.dim;
  Mat h(d, d);
  for (int j = 0; j < d; ++j) {
    const double hj = step * (1.0 + std::abs(x[j]));
    Vec xp = x, xm = x;
    xp[j] += hj;
    xm[j] -= hj;
    h.col(j) = (sys.grad_h(xp) - sys.grad_h(xm)) / (2.0 * hj);
  }
  return 0.5 * (h + h.transpose());
}

struct NondegeneracyInfo {
  double condition;    ///< 2-norm condition number, +inf when singular
  double determinant;  ///< det omega(x)
};

/// Condition number and determinant of omega at x.
inline NondegeneracyInfo check_nondegeneracy(const SymplecticSystem& sys,
                                             const Vec& x) {
  Mat w = sys.omega(x);
  Eigen::JacobiSVD<Mat> svd(w);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(sys.dim - 1);
  const double cond = (smin > 0.0)
                          ? smax / smin
                          : std::numeric_limits<double>::infinity();
  return {cond, w.determinant()};
}

/// xdot = omega^{mu nu}(x) dH_nu, by linear solve against omega(x).
inline Vec hamiltonian_vector_field(const SymplecticSystem& sys, const Vec& x) {
  if (!sys.chart.contains(x, Containment::interior))
    throw Error(detail::cat("hamiltonian_vector_field: point outside chart of '",
                            sys.name, "'"));
  const Vec g = sys.grad_h(x);
  Mat w = sys.omega(x);
  if (sys.dim == 2) {
    const double a = w(0, 1);
    if (a == 0.0)
      throw SingularFormError("omega singular (2d)", std::numeric_limits<double>::infinity());
    return Vec{{-g[1] / a, g[0] / a}};
  }
  Eigen::PartialPivLU<Mat> lu(w);
  Vec v = lu.solve(g);
  if (!v.allFinite() || (w * v - g).norm() > 1e-8 * (1.0 + g.norm())) {
    throw SingularFormError(
        detail::cat("omega singular or ill-conditioned in '", sys.name, "'"),
        check_nondegeneracy(sys, x).condition);
  }
  return v;
}

/// Max absolute cyclic sum d_a w_{mn} + d_n w_{am} + d_m w_{na} over index
/// triples, derivatives by central differences with step h. Zero (to
/// O(h^2)) exactly when d omega = 0.
inline double check_closedness(const SymplecticSystem& sys, const Vec& x,
                               double h = 1e-4) {
  const int d = sys.dim;
  std::vector<Mat> dw(d);  // dw[a] = d omega / d x^a
  for (int a = 0; a < d; ++a) {
    Vec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    dw[a] = (sys.omega(xp) - sys.omega(xm)) / (2.0 * h);
  }
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int m = a + 1; m < d; ++m)
      for (int n = m + 1; n < d; ++n) {
        const double r = dw[a](m, n) + dw[n](a, m) + dw[m](n, a);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

// ---------------------------------------------------------------------------
// Polar/canonical pairs (phi_i, P_i): q_i = r_i sin phi_i, p_i = r_i cos phi_i,
// P_i = r_i^2 / 2. A canonical transformation wherever all r_i > 0.

struct PolarCanonical {
  Vec phi;     ///< quadrant-correct angles, one per degree of freedom
  Vec action;  ///< P_i = (q_i^2 + p_i^2) / 2
};

inline PolarCanonical polar_canonical_transform(const Vec& q, const Vec& p) {
  if (q.size() != p.size())
    throw Error("polar_canonical_transform: q/p size mismatch");
  const int n = static_cast<int>(q.size());
  PolarCanonical out{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    const double r2 = q[i] * q[i] + p[i] * p[i];
    if (r2 == 0.0)
      throw Error(detail::cat("polar_canonical_transform: r_", i, " = 0"));
    out.phi[i] = std::atan2(q[i], p[i]);
    out.action[i] = 0.5 * r2;
  }
  return out;
}

inline std::pair<Vec, Vec> polar_canonical_inverse(const Vec& phi, const Vec& action) {
  const int n = static_cast<int>(phi.size());
  Vec q(n), p(n);
  for (int i = 0; i < n; ++i) {
    if (action[i] <= 0.0)
      throw Error("polar_canonical_inverse: nonpositive action variable");
    const double r = std::sqrt(2.0 * action[i]);
    q[i] = r * std::sin(phi[i]);
    p[i] = r * std::cos(phi[i]);
  }
  return {q, p};
}

/// {f, g}(x) = omega^{mu nu} d_mu f d_nu g, gradients by central
/// differences with per-coordinate step `step * (1 + |x_i|)`.
inline double poisson_bracket(const SymplecticSystem& sys,
                              const std::function<double(const Vec&)>& f,
                              const std::function<double(const Vec&)>& g,
                              const Vec& x, double step = 1e-6) {
  const int d = sys.dim;
  Vec gf(d), gg(d);
  for (int i = 0; i < d; ++i) {
    const double h = step * (1.0 + std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    gf[i] = (f(xp) - f(xm)) / (2.0 * h);
    gg[i] = (g(xp) - g(xm)) / (2.0 * h);
  }
  Mat w = sys.omega(x);
  Eigen::PartialPivLU<Mat> lu(w);
  return gf.dot(lu.solve(gg));
}

// ---------------------------------------------------------------------------
// Builtin catalogue

struct BuiltinParams {
  int n = 1;              ///< degrees of freedom (canonical only)
  double margin = 0.05;   ///< chart margin around degenerate loci
  std::string hamiltonian = "free_particle";  ///< canonical H choice
};

namespace detail {

inline SymplecticSystem make_canonical_system(int n,
                                              std::function<double(const Vec&)> h,
                                              std::function<Vec(const Vec&)> grad,
                                              std::function<Mat(const Vec&)> hess,
                                              const std::string& name) {
  if (n < 1) throw Error("canonical system: n must be positive");
  const int dim = 2 * n;
  Mat w = Mat::Zero(dim, dim);
  w.topRightCorner(n, n) = -Mat::Identity(n, n);
  w.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  SymplecticSystem sys;
  sys.name = name;
  sys.dim = dim;
  sys.omega = [w](const Vec&) { return w; };
  sys.hamiltonian = std::move(h);
  sys.grad_h = std::move(grad);
  sys.hess_h = std::move(hess);
  sys.chart = ChartDomain::unbounded(dim);
  sys.canonical = true;
  return sys;
}

}  // namespace detail

/// Canonical system on R^{2n} with a user-supplied Hamiltonian. The
/// gradient may be omitted (central differences, step 1e-6) but analytic
/// gradients are preferred for anything beyond smoke tests.
inline SystemPtr make_canonical(int n, std::function<double(const Vec&)> h,
                                std::function<Vec(const Vec&)> grad = nullptr,
                                std::function<Mat(const Vec&)> hess = nullptr,
                                const std::string& name = "canonical") {
  if (!grad) {
    auto hh = h;
    grad = [hh](const Vec& x) {
      const int d = static_cast<int>(x.size());
      Vec g(d);
      for (int i = 0; i < d; ++i) {
        const double step = 1e-6 * (1.0 + std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        g[i] = (hh(xp) - hh(xm)) / (2.0 * step);
      }
      return g;
    };
  }
  return std::make_shared<const SymplecticSystem>(detail::make_canonical_system(
      n, std::move(h), std::move(grad), std::move(hess), name));
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "canonical",         "sphere", "sphere_xy_chart",
      "sphere_times_plane", "torus",  "nonclosed_demo"};
  return names;
}

/// The example systems: sphere with omega = cos(theta) dtheta ^ dphi and
/// H = sin(theta); the same sphere in the pole-covering xy chart; the flat
/// torus; the S^2 x R^2 product; the standard structure on R^{2n}; and a
/// deliberately non-closed 4d form used as a negative control (rejected by
/// validate_system unless forced).
inline SystemPtr builtin_system(const std::string& name, BuiltinParams params = {}) {
  if (params.margin <= 0.0) throw Error("builtin_system: margin must be positive");
  const double m = params.margin;

  if (name == "canonical") {
    const int n = params.n;
    if (n < 1) throw Error("builtin_system: canonical needs n >= 1");
    if (params.hamiltonian == "free_particle") {
      return make_canonical(
          n, [n](const Vec& x) { return 0.5 * x.tail(n).squaredNorm(); },
          [n](const Vec& x) {
            Vec g = Vec::Zero(2 * n);
            g.tail(n) = x.tail(n);
            return g;
          },
          [n](const Vec&) {
            Mat h = Mat::Zero(2 * n, 2 * n);
            h.bottomRightCorner(n, n) = Mat::Identity(n, n);
            return h;
          },
          "canonical_free_particle");
    }
    if (params.hamiltonian == "harmonic") {
      return make_canonical(
          n, [](const Vec& x) { return 0.5 * x.squaredNorm(); },
          [](const Vec& x) { return x; },
          [n](const Vec&) { return Mat::Identity(2 * n, 2 * n); },
          "canonical_harmonic");
    }
    throw Error(detail::cat("builtin_system: unknown canonical hamiltonian '",
                            params.hamiltonian, "'"));
  }

  if (name == "sphere") {
    SymplecticSystem sys;
    sys.name = "sphere";
    sys.dim = 2;
    sys.omega = [](const Vec& x) {
      const double c = std::cos(x[0]);
      Mat w(2, 2);
      w << 0.0, c, -c, 0.0;
      return w;
    };
    sys.hamiltonian = [](const Vec& x) { return std::sin(x[0]); };
    sys.grad_h = [](const Vec& x) { return Vec{{std::cos(x[0]), 0.0}}; };
    sys.chart.coords = {{-std::numbers::pi / 2, std::numbers::pi / 2, false},
                        {0.0, two_pi, true}};
    sys.chart.margin = m;
    sys.cycle_domain = {{{-std::numbers::pi / 2, std::numbers::pi / 2},
                         {0.0, two_pi}}};
    return std::make_shared<const SymplecticSystem>(std::move(sys));
  }

  if (name == "sphere_xy_chart") {
    SymplecticSystem sys;
    sys.name = "sphere_xy_chart";
    sys.dim = 2;
    sys.omega = [](const Vec& x) {
      const double s = std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
      Mat w(2, 2);
      w << 0.0, -1.0 / s, 1.0 / s, 0.0;
      return w;
    };
    sys.hamiltonian = [](const Vec& x) {
      return std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
    };
    sys.grad_h = [](const Vec& x) {
      const double s = std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
      return Vec{{-x[0] / s, -x[1] / s}};
    };
    sys.chart.coords = {{-1.0, 1.0, false}, {-1.0, 1.0, false}};
    sys.chart.margin = 0.0;  // handled by the disk predicate below
    sys.chart.predicate = [m](const Vec& x, double /*margin*/) {
      return x.squaredNorm() < 1.0 - m;
    };
    return std::make_shared<const SymplecticSystem>(std::move(sys));
  }

  if (name == "torus") {
    SymplecticSystem sys;
    sys.name = "torus";
    sys.dim = 2;
    sys.omega = [](const Vec&) {
      Mat w(2, 2);
      w << 0.0, 1.0, -1.0, 0.0;
      return w;
    };
    sys.hamiltonian = [](const Vec& x) { return std::sin(x[0]); };
    sys.grad_h = [](const Vec& x) { return Vec{{std::cos(x[0]), 0.0}}; };
    sys.chart.coords = {{0.0, two_pi, true}, {0.0, two_pi, true}};
    sys.cycle_domain = {{{0.0, two_pi}, {0.0, two_pi}}};
    return std::make_shared<const SymplecticSystem>(std::move(sys));
  }

  if (name == "sphere_times_plane") {
    SymplecticSystem sys;
    sys.name = "sphere_times_plane";
    sys.dim = 4;  // coordinates (theta, phi, q, p)
    sys.omega = [](const Vec& x) {
      const double c = std::cos(x[0]);
      Mat w = Mat::Zero(4, 4);
      w(0, 1) = c;
      w(1, 0) = -c;
      w(2, 3) = -1.0;
      w(3, 2) = 1.0;
      return w;
    };
    sys.hamiltonian = [](const Vec& x) {
      return std::sin(x[0]) + 0.5 * x[3] * x[3];
    };
    sys.grad_h = [](const Vec& x) {
      return Vec{{std::cos(x[0]), 0.0, 0.0, x[3]}};
    };
    sys.chart.coords = {{-std::numbers::pi / 2, std::numbers::pi / 2, false},
                        {0.0, two_pi, true},
                        {},
                        {}};
    sys.chart.margin = m;
    return std::make_shared<const SymplecticSystem>(std::move(sys));
  }

  if (name == "nonclosed_demo") {
    // omega = dq1^dp1 + dq2^dp2 + p1 dq1^dq2 on coordinates (q1, q2, p1, p2):
    // d omega = dp1 ^ dq1 ^ dq2 != 0. Negative control only.
    SymplecticSystem sys;
    sys.name = "nonclosed_demo";
    sys.dim = 4;
    sys.omega = [](const Vec& x) {
      Mat w = Mat::Zero(4, 4);
      w(0, 2) = 1.0;
      w(2, 0) = -1.0;
      w(1, 3) = 1.0;
      w(3, 1) = -1.0;
      w(0, 1) = x[2];
      w(1, 0) = -x[2];
      return w;
    };
    sys.hamiltonian = [](const Vec& x) { return 0.5 * (x[2] * x[2] + x[3] * x[3]); };
    sys.grad_h = [](const Vec& x) { return Vec{{0.0, 0.0, x[2], x[3]}}; };
    sys.chart = ChartDomain::unbounded(4);
    return std::make_shared<const SymplecticSystem>(std::move(sys));
  }

  throw Error(detail::cat("builtin_system: unknown system '", name, "'"));
}

// ---------------------------------------------------------------------------
// Axiom validation

struct ValidationReport {
  double max_antisymmetry = 0.0;   ///< max |w_{mn} + w_{nm}|
  double max_inverse_defect = 0.0; ///< max |w^{-1} w - I|
  double max_closedness = 0.0;     ///< max cyclic-sum residual
  double max_condition = 0.0;
  bool closed = true;
};

/// Samples `n_points` random chart points and checks the symplectic-form
/// axioms. Throws unless the form is antisymmetric, invertible and closed
/// at every sample; a non-closed form is tolerated only with `force_nonclosed`.
inline ValidationReport validate_system(const SymplecticSystem& sys,
                                        int n_points = 100,
                                        unsigned long long seed = 12345,
                                        bool force_nonclosed = false,
                                        double closedness_tol = 1e-6,
                                        double fd_step = 1e-4) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    const double u = (rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };
  ValidationReport rep;
  for (int s = 0; s < n_points; ++s) {
    Vec x(sys.dim);
    for (int i = 0; i < sys.dim; ++i) {
      const auto& r = sys.chart.coords[i];
      double lo = r.bounded() ? r.lo + sys.chart.margin + fd_step : -2.0;
      double hi = r.bounded() ? r.hi - sys.chart.margin - fd_step : 2.0;
      if (r.periodic) {
        lo = r.lo;
        hi = r.hi;
      }
      x[i] = uniform(lo, hi);
    }
    if (sys.chart.predicate && !sys.chart.contains(x)) {
      --s;  // rejection sampling for non-box charts
      continue;
    }
    Mat w = sys.omega(x);
    rep.max_antisymmetry =
        std::max(rep.max_antisymmetry, (w + w.transpose()).cwiseAbs().maxCoeff());
    Eigen::PartialPivLU<Mat> lu(w);
    Mat winv = lu.inverse();
    rep.max_inverse_defect = std::max(
        rep.max_inverse_defect,
        (winv * w - Mat::Identity(sys.dim, sys.dim)).cwiseAbs().maxCoeff());
    rep.max_condition =
        std::max(rep.max_condition, check_nondegeneracy(sys, x).condition);
    rep.max_closedness = std::max(rep.max_closedness, check_closedness(sys, x, fd_step));
  }
  rep.closed = rep.max_closedness <= closedness_tol;
  if (rep.max_antisymmetry > 1e-12)
    throw Error(detail::cat("validate_system: omega not antisymmetric in '",
                            sys.name, "' (", rep.max_antisymmetry, ")"));
  if (rep.max_inverse_defect > 1e-10 || !std::isfinite(rep.max_condition))
    throw Error(detail::cat("validate_system: omega not invertible in '",
                            sys.name, "'"));
  if (!rep.closed && !force_nonclosed)
    throw Error(detail::cat("validate_system: omega not closed in '", sys.name,
                            "' (residual ", rep.max_closedness,
                            "); pass force_nonclosed to accept"));
  return rep;
}

}  // namespace symplab

#endif  // SYMPLAB_SYSTEM_HPP_
