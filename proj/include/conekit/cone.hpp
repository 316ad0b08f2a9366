#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "conekit/metric_space.hpp"

namespace conekit {

/// arccosh(1 + t) evaluated through log1p so that small excesses over 1
/// keep full precision; negative t is clamped within a 1e-12 guard.
inline double stable_acosh1p(double t) {
  constexpr double kGuard = 1e-12;
  if (t < 0.0) {
    if (t < -kGuard) throw std::domain_error("arccosh argument below 1");
    t = 0.0;
  }
  return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

inline double stable_acosh(double a) { return stable_acosh1p(a - 1.0); }

/// cosh(x) - 1 without cancellation.
inline double coshm1(double x) {
  double s = std::sinh(0.5 * x);
  return 2.0 * s * s;
}

/// Central angle between two base points seen from the apex of a cone of
/// radius r0: min(pi, d / sinh r0).
inline double cone_angle(double base_distance, double r0) {
  detail::require(r0 > 0.0, "cone radius must be positive");
  detail::require(base_distance >= 0.0, "distance must be non-negative");
  return std::min(std::numbers::pi, base_distance / std::sinh(r0));
}

/// Hyperbolic law of cosines between two cone points given by their radii
/// and central angle. The textbook form cosh r cosh r' - sinh r sinh r'
/// cos(theta) cancels catastrophically near theta = 0; the rearrangement
/// cosh(r - r') + 2 sinh r sinh r' sin^2(theta/2) is exact.
inline double cone_law_of_cosines(double r, double rp, double theta) {
  double s = std::sin(0.5 * theta);
  double t = coshm1(r - rp) + 2.0 * std::sinh(r) * std::sinh(rp) * s * s;
  return stable_acosh1p(t);
}

/// Distance at the rim of the cone as a function of base distance:
/// mu(t) = arccosh(cosh^2 r0 - sinh^2 r0 * cos(min(pi, t / sinh r0))).
/// Non-decreasing, concave, subadditive; constant 2*r0 past pi*sinh(r0).
inline double mu(double t, double r0) {
  detail::require(t >= 0.0, "mu argument must be non-negative");
  double theta = cone_angle(t, r0);
  double sh = std::sinh(r0);
  double s = std::sin(0.5 * theta);
  return stable_acosh1p(2.0 * sh * sh * s * s);
}

/// Point of a cone: the apex (r = 0) or an interior point (base id, radius).
struct ConePoint {
  PointId base = 0;
  double r = 0.0;

  static ConePoint apex() { return ConePoint{0, 0.0}; }
  static ConePoint interior(PointId y, double radius) { return ConePoint{y, radius}; }
  bool is_apex() const { return r == 0.0; }

  bool operator==(const ConePoint& o) const {
    if (is_apex() || o.is_apex()) return is_apex() && o.is_apex();
    return base == o.base && r == o.r;
  }
};

/// The hyperbolic cone C(Y) of radius r0 over a finite base, materialized
/// at a sorted set of sample radii that always contains r0. Pairwise
/// distances follow the closed-form law of cosines, so the sampling only
/// affects which points exist, never their distances.
class ConeSpace {
 public:
  static constexpr std::size_t kDefaultRadiusSteps = 8;

  ConeSpace(FiniteMetricSpace base, double r0, std::size_t radius_steps = kDefaultRadiusSteps)
      : base_(std::move(base)), r0_(r0) {
    detail::require(r0 > 0.0, "cone radius must be positive");
    detail::require(radius_steps >= 1, "need at least one sample radius");
    detail::require(base_.size() >= 1, "cone base must be non-empty");
    for (std::size_t k = 1; k <= radius_steps; ++k)
      radii_.push_back(r0_ * static_cast<double>(k) / static_cast<double>(radius_steps));
    radii_.back() = r0_;
  }

  const FiniteMetricSpace& base() const { return base_; }
  double r0() const { return r0_; }
  const std::vector<double>& radii() const { return radii_; }

  void checkPoint(const ConePoint& p) const {
    if (p.is_apex()) return;
    base_.checkPoint(p.base);
    detail::require(p.r > 0.0 && p.r <= r0_ + kSlack, "cone radius outside (0, r0]");
  }

  /// Central angle between the base coordinates of two cone points.
  double angle(PointId y, PointId yp) const { return cone_angle(base_.at(y, yp), r0_); }

  double distance(const ConePoint& a, const ConePoint& b) const {
    checkPoint(a);
    checkPoint(b);
    if (a.is_apex() && b.is_apex()) return 0.0;
    if (a.is_apex()) return b.r;
    if (b.is_apex()) return a.r;
    return cone_law_of_cosines(a.r, b.r, angle(a.base, b.base));
  }

  ConePoint iota(PointId y) const {
    base_.checkPoint(y);
    return ConePoint::interior(y, r0_);
  }

  PointId proj(const ConePoint& p) const {
    detail::require(!p.is_apex(), "the apex has no projection to the base");
    base_.checkPoint(p.base);
    return p.base;
  }

  /// Apex first, then base-major / radius-ascending interior points.
  std::vector<ConePoint> materializedPoints() const {
    std::vector<ConePoint> pts;
    pts.push_back(ConePoint::apex());
    for (PointId y = 0; y < base_.size(); ++y)
      for (double r : radii_) pts.push_back(ConePoint::interior(y, r));
    return pts;
  }

  /// Metric space over the materialized points. Validation is exhaustive
  /// (O(N^3)) and intended for desk-scale cones.
  FiniteMetricSpace materialize(bool validate = true) const {
    std::vector<ConePoint> pts = materializedPoints();
    std::size_t n = pts.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = distance(pts[i], pts[j]);
        d[i * n + j] = v;
        d[j * n + i] = v;
      }
    return FiniteMetricSpace(n, std::move(d), validate);
  }

 private:
  FiniteMetricSpace base_;
  double r0_;
  std::vector<double> radii_;
};

/// Quotient of the cone base by an isometric permutation action:
/// d(orbit, orbit') = min over representatives, and the cone over the
/// quotient base is the quotient of the cone.
inline ConeSpace cone_quotient(const ConeSpace& cone, const std::vector<Permutation>& generators) {
  const FiniteMetricSpace& base = cone.base();
  const std::size_t n = base.size();
  for (const Permutation& g : generators) {
    detail::require(g.size() == n, "generator length must match the base size");
    std::vector<char> seen(n, 0);
    for (PointId x = 0; x < n; ++x) {
      detail::require(g[x] < n, "permutation image out of range");
      detail::require(!seen[g[x]], "generator is not a permutation");
      seen[g[x]] = 1;
    }
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y)
        detail::require(std::abs(base.at(g[x], g[y]) - base.at(x, y)) <= kSlack,
                        "generator does not preserve the base metric");
  }

  // Orbit partition via union-find over the generator moves.
  std::vector<PointId> parent(n);
  for (PointId x = 0; x < n; ++x) parent[x] = x;
  auto find = [&](PointId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Permutation& g : generators)
    for (PointId x = 0; x < n; ++x) {
      PointId a = find(x), b = find(g[x]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

  std::vector<PointId> reps;
  std::vector<std::size_t> orbitOf(n);
  for (PointId x = 0; x < n; ++x)
    if (find(x) == x) reps.push_back(x);
  std::sort(reps.begin(), reps.end());
  for (PointId x = 0; x < n; ++x)
    orbitOf[x] = static_cast<std::size_t>(
        std::lower_bound(reps.begin(), reps.end(), find(x)) - reps.begin());

  const std::size_t m = reps.size();
  std::vector<double> qd(m * m, kInfinite);
  for (std::size_t i = 0; i < m; ++i) qd[i * m + i] = 0.0;
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y) {
      std::size_t i = orbitOf[x], j = orbitOf[y];
      if (i != j) qd[i * m + j] = std::min(qd[i * m + j], base.at(x, y));
    }
  FiniteMetricSpace quotient(m, std::move(qd), true);
  return ConeSpace(std::move(quotient), cone.r0(), cone.radii().size());
}

}  // namespace conekit
