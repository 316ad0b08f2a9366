#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "conekit/metric_space.hpp"

namespace conekit {

/// Non-empty set of points of an ambient space, kept sorted and unique.
struct Subspace {
  std::vector<PointId> members;

  Subspace() = default;
  explicit Subspace(std::vector<PointId> pts) : members(std::move(pts)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    detail::require(!members.empty(), "subspace must be non-empty");
  }

  bool contains(PointId p) const {
    return std::binary_search(members.begin(), members.end(), p);
  }

  bool operator==(const Subspace& o) const { return members == o.members; }
  bool operator<(const Subspace& o) const { return members < o.members; }
};

/// All ambient points within distance alpha of some member.
inline Subspace neighborhood(const FiniteMetricSpace& space, const Subspace& y, double alpha) {
  detail::require(alpha >= 0.0, "neighbourhood radius must be non-negative");
  for (PointId p : y.members) space.checkPoint(p);
  std::vector<PointId> pts;
  for (PointId x = 0; x < space.size(); ++x)
    for (PointId p : y.members)
      if (space.at(x, p) <= alpha + kSlack) {
        pts.push_back(x);
        break;
      }
  return Subspace(std::move(pts));
}

/// Smallest alpha such that every chosen geodesic between members of Y stays
/// in the alpha-neighbourhood of Y.
inline double quasi_convexity_constant(const GeodesicOracle& oracle, const Subspace& y) {
  const FiniteMetricSpace& space = oracle.metric();
  double alpha = 0.0;
  for (PointId a : y.members)
    for (PointId b : y.members) {
      if (a == b) continue;
      for (PointId u : oracle.geodesic(a, b).vertices) {
        double best = kInfinite;
        for (PointId p : y.members) best = std::min(best, space.at(u, p));
        alpha = std::max(alpha, best);
      }
    }
  return alpha;
}

/// Union over ordered member pairs of the 10*delta-neighbourhood of the
/// chosen geodesic joining them.
inline Subspace cylinder(const GeodesicOracle& oracle, const Subspace& y, double delta) {
  detail::require(delta >= 0.0, "delta must be non-negative");
  const FiniteMetricSpace& space = oracle.metric();
  const double radius = 10.0 * delta;
  std::vector<char> inside(space.size(), 0);
  for (PointId a : y.members)
    for (PointId b : y.members) {
      for (PointId u : oracle.geodesic(a, b).vertices)
        for (PointId x = 0; x < space.size(); ++x)
          if (!inside[x] && space.at(x, u) <= radius + kSlack) inside[x] = 1;
    }
  std::vector<PointId> pts;
  for (PointId x = 0; x < space.size(); ++x)
    if (inside[x]) pts.push_back(x);
  return Subspace(std::move(pts));
}

struct StrongQuasiConvexity {
  bool holds = true;
  /// A pair (x, x') of members with no admissible detour, when !holds.
  std::optional<std::pair<PointId, PointId>> witness;
};

/// Strong quasi-convexity test: for every x, x' in Y there must exist
/// p, p' in Y with d(p,x) <= 10*delta, d(p',x') <= 10*delta such that the
/// chosen geodesics [x,p], [p,p'], [p',x'] all stay inside Y.
inline StrongQuasiConvexity is_strongly_quasiconvex(const GeodesicOracle& oracle,
                                                    const Subspace& y, double delta) {
  detail::require(delta >= 0.0, "delta must be non-negative");
  const FiniteMetricSpace& space = oracle.metric();
  const double ball = 10.0 * delta + kSlack;
  auto insideY = [&](const std::vector<PointId>& path) {
    for (PointId u : path)
      if (!y.contains(u)) return false;
    return true;
  };
  StrongQuasiConvexity out;
  for (PointId x : y.members)
    for (PointId xp : y.members) {
      bool found = false;
      for (PointId p : y.members) {
        if (space.at(p, x) > ball) continue;
        if (!insideY(oracle.geodesic(x, p).vertices)) continue;
        for (PointId pp : y.members) {
          if (space.at(pp, xp) > ball) continue;
          if (!insideY(oracle.geodesic(p, pp).vertices)) continue;
          if (!insideY(oracle.geodesic(pp, xp).vertices)) continue;
          found = true;
          break;
        }
        if (found) break;
      }
      if (!found) {
        out.holds = false;
        out.witness = std::make_pair(x, xp);
        return out;
      }
    }
  return out;
}

/// Diameter of a thickened intersection. Empty intersections are reported
/// as a distinct status rather than 0; the largest-piece aggregation maps
/// them to 0 while diagnostics keep the distinction.
struct OverlapDiameter {
  bool empty = false;
  double value = 0.0;
};

inline OverlapDiameter overlap_diameter(const FiniteMetricSpace& space, const Subspace& y,
                                        const Subspace& z, double margin) {
  Subspace yn = neighborhood(space, y, margin);
  Subspace zn = neighborhood(space, z, margin);
  std::vector<PointId> common;
  std::set_intersection(yn.members.begin(), yn.members.end(), zn.members.begin(),
                        zn.members.end(), std::back_inserter(common));
  OverlapDiameter out;
  if (common.empty()) {
    out.empty = true;
    return out;
  }
  for (std::size_t i = 0; i < common.size(); ++i)
    for (std::size_t j = i + 1; j < common.size(); ++j)
      out.value = std::max(out.value, space.at(common[i], common[j]));
  return out;
}

/// Largest piece of a family: sup over i != j of the diameter of
/// Y_i^{+20 delta} intersected with Y_j^{+20 delta}. Empty intersections
/// contribute 0; a family of fewer than two members yields 0.
inline double largest_piece(const FiniteMetricSpace& space, const std::vector<Subspace>& family,
                            double delta) {
  detail::require(delta >= 0.0, "delta must be non-negative");
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      detail::require(!(family[i] == family[j]), "family members must be pairwise distinct");
  if (family.size() < 2) return 0.0;
  double piece = 0.0;
  const double margin = 20.0 * delta;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      OverlapDiameter d = overlap_diameter(space, family[i], family[j], margin);
      if (!d.empty) piece = std::max(piece, d.value);
    }
  return piece;
}

}  // namespace conekit
