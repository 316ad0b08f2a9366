#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

#include "conekit/cone.hpp"
#include "conekit/hyperbolicity.hpp"
#include "conekit/metric_space.hpp"
#include "conekit/subspace.hpp"

namespace conekit {

/// Materialized point of a cone-off: a base vertex, an interior cone point,
/// or a cone apex.
struct ConeOffPoint {
  enum class Kind { Base, Interior, Apex };
  Kind kind = Kind::Base;
  PointId vertex = 0;     // base vertex id (Base, Interior)
  std::size_t cone = 0;   // cone index (Interior, Apex)
  double r = 0.0;         // radius (Interior)
};

/// The cone-off over a weighted graph: one hyperbolic cone of radius r0 per
/// family member, glued along the member through the rim map. Base vertices
/// double as rim points of every cone whose member contains them.
///
/// Distances are the chain metric: the shortest-path closure of the
/// two-scale distance over the materialized point set. Intermediate points
/// of an optimal chain may always be taken in the base, so restricting
/// chains to materialized points is exact for base pairs; cone interiors
/// are covered by the closed-form cone metric.
class ConeOffSpace {
 public:
  ConeOffSpace(GeodesicOracle oracle, std::vector<Subspace> family, double r0,
               std::size_t radius_steps = ConeSpace::kDefaultRadiusSteps)
      : oracle_(std::move(oracle)), family_(std::move(family)), r0_(r0), steps_(radius_steps) {
    detail::require(r0_ > 0.0, "cone radius must be positive");
    detail::require(steps_ >= 1, "need at least one sample radius");
    for (std::size_t i = 0; i < family_.size(); ++i) {
      for (PointId p : family_[i].members) base().checkPoint(p);
      for (std::size_t j = i + 1; j < family_.size(); ++j)
        detail::require(!(family_[i] == family_[j]), "family members must be pairwise distinct");
    }
    buildCones();
    buildPoints();
    buildChainGraph();
  }

  const GeodesicOracle& oracle() const { return oracle_; }
  const FiniteMetricSpace& base() const { return oracle_.metric(); }
  const std::vector<Subspace>& family() const { return family_; }
  double r0() const { return r0_; }
  std::size_t radiusSteps() const { return steps_; }
  const std::vector<ConeSpace>& cones() const { return cones_; }

  std::size_t pointCount() const { return points_.size(); }
  const ConeOffPoint& point(std::size_t idx) const { return points_.at(idx); }
  const std::vector<ConeOffPoint>& points() const { return points_; }

  std::size_t baseIndex(PointId u) const {
    base().checkPoint(u);
    return u;
  }
  std::size_t apexIndex(std::size_t cone) const { return apexIndex_.at(cone); }

  /// Interior sample radii (exclusive of r0; the rim is the base itself).
  const std::vector<double>& interiorRadii() const { return interiorRadii_; }

  std::size_t interiorIndex(std::size_t cone, PointId vertex, std::size_t radiusStep) const {
    std::size_t local = localIndex(cone, vertex);
    return interiorBegin_.at(cone) + local * interiorRadii_.size() + radiusStep;
  }

  /// Two-scale distance between materialized points: the cone metric inside
  /// one cone, the base metric between base vertices sharing no member, the
  /// rim distance mu(d) between base vertices sharing one, infinite
  /// otherwise.
  double scDistance(std::size_t a, std::size_t b) const {
    if (a == b) return 0.0;
    const ConeOffPoint& pa = points_[a];
    const ConeOffPoint& pb = points_[b];
    using Kind = ConeOffPoint::Kind;
    if (pa.kind == Kind::Base && pb.kind == Kind::Base) {
      double d = base().at(pa.vertex, pb.vertex);
      return sharesCone(pa.vertex, pb.vertex) ? mu(d, r0_) : d;
    }
    std::size_t ca = pa.kind == Kind::Base ? 0 : pa.cone;
    std::size_t cb = pb.kind == Kind::Base ? 0 : pb.cone;
    if (pa.kind != Kind::Base && pb.kind != Kind::Base && ca != cb) return kInfinite;
    std::size_t cone = pa.kind != Kind::Base ? ca : cb;
    ConePoint qa = localConePoint(cone, pa);
    ConePoint qb = localConePoint(cone, pb);
    if (qa.base == kInvalid || qb.base == kInvalid) return kInfinite;
    return cones_[cone].distance(qa, qb);
  }

  /// Chain metric from a single source to every materialized point.
  std::vector<double> chainDistancesFrom(std::size_t source) const {
    return dijkstra(adjacency_, source, nullptr);
  }

  double chainMetric(std::size_t a, std::size_t b) const {
    std::vector<double> d = chainDistancesFrom(a);
    return d[b];
  }

  /// A chain realizing the chain metric between two points.
  std::vector<std::size_t> chainBetween(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> parent(points_.size(), kInvalid);
    dijkstra(adjacency_, a, &parent);
    std::vector<std::size_t> path;
    for (std::size_t cur = b; cur != kInvalid; cur = parent[cur]) {
      path.push_back(cur);
      if (cur == a) break;
    }
    std::reverse(path.begin(), path.end());
    detail::require(!path.empty() && path.front() == a, "no chain found");
    return path;
  }

  /// Chain-metric closure over all materialized points.
  FiniteMetricSpace materialize(bool validate = false) const {
    const std::size_t n = points_.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<double> row = chainDistancesFrom(s);
      for (std::size_t t = 0; t < n; ++t) d[s * n + t] = row[t];
    }
    return FiniteMetricSpace(n, std::move(d), validate);
  }

  /// Projection to the base: identity on base vertices, base coordinate on
  /// cone interiors; apexes are outside the domain.
  PointId project(std::size_t idx) const {
    const ConeOffPoint& p = points_.at(idx);
    detail::require(p.kind != ConeOffPoint::Kind::Apex, "apexes have no projection");
    return p.vertex;
  }

  /// Length-metric proxy: shortest path where every hop is realizable by a
  /// continuous path at that cost (base edges at their weight, radial cone
  /// segments, and within-cone hops whose chosen base geodesic stays in the
  /// member). Always at least the chain metric.
  std::vector<double> pathStyleDistancesFrom(std::size_t source) const {
    ensurePathGraph();
    return dijkstra(pathAdjacency_, source, nullptr);
  }

 private:
  static constexpr std::size_t kInvalid = static_cast<std::size_t>(-1);

  void buildCones() {
    for (const Subspace& y : family_)
      cones_.emplace_back(restrictTo(base(), y.members), r0_, steps_);
  }

  void buildPoints() {
    const std::size_t n = base().size();
    conesOf_.assign(n, {});
    for (std::size_t i = 0; i < family_.size(); ++i)
      for (PointId p : family_[i].members) conesOf_[p].push_back(i);
    for (PointId u = 0; u < n; ++u)
      points_.push_back(ConeOffPoint{ConeOffPoint::Kind::Base, u, 0, 0.0});
    // Interior radii shared by all cones: r0 * k / m for k = 1..m-1.
    for (std::size_t k = 1; k < steps_; ++k)
      interiorRadii_.push_back(r0_ * static_cast<double>(k) / static_cast<double>(steps_));
    for (std::size_t i = 0; i < family_.size(); ++i) {
      apexIndex_.push_back(points_.size());
      points_.push_back(ConeOffPoint{ConeOffPoint::Kind::Apex, 0, i, 0.0});
      interiorBegin_.push_back(points_.size());
      for (PointId v : family_[i].members)
        for (double r : interiorRadii_)
          points_.push_back(ConeOffPoint{ConeOffPoint::Kind::Interior, v, i, r});
    }
  }

  bool sharesCone(PointId u, PointId v) const {
    const auto& a = conesOf_[u];
    const auto& b = conesOf_[v];
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return true;
      a[i] < b[j] ? ++i : ++j;
    }
    return false;
  }

  std::size_t localIndex(std::size_t cone, PointId vertex) const {
    const auto& mem = family_[cone].members;
    auto it = std::lower_bound(mem.begin(), mem.end(), vertex);
    if (it == mem.end() || *it != vertex) return kInvalid;
    return static_cast<std::size_t>(it - mem.begin());
  }

  /// Coordinates of a materialized point inside one cone, or base==kInvalid
  /// when the point does not belong to that cone.
  ConePoint localConePoint(std::size_t cone, const ConeOffPoint& p) const {
    using Kind = ConeOffPoint::Kind;
    if (p.kind == Kind::Apex)
      return p.cone == cone ? ConePoint::apex() : ConePoint{kInvalid, 1.0};
    std::size_t local = localIndex(cone, p.vertex);
    if (local == kInvalid) return ConePoint{kInvalid, 1.0};
    if (p.kind == Kind::Base) return ConePoint::interior(local, r0_);
    return p.cone == cone ? ConePoint::interior(local, p.r) : ConePoint{kInvalid, 1.0};
  }

  void addEdge(std::vector<std::vector<std::pair<std::size_t, double>>>& adj, std::size_t a,
               std::size_t b, double w) const {
    adj[a].emplace_back(b, w);
    adj[b].emplace_back(a, w);
  }

  /// Sparse two-scale graph: base edges, all pairs inside each cone, and the
  /// rim identification (base vertices are the rim). Apexes connect only
  /// through their cone.
  void buildChainGraph() {
    adjacency_.assign(points_.size(), {});
    for (const WeightedGraph::Edge& e : oracle_.graph().edges)
      addEdge(adjacency_, baseIndex(e.u), baseIndex(e.v), scDistance(e.u, e.v));
    for (std::size_t i = 0; i < family_.size(); ++i) {
      std::vector<std::size_t> conePts = conePointIndices(i);
      for (std::size_t a = 0; a < conePts.size(); ++a)
        for (std::size_t b = a + 1; b < conePts.size(); ++b)
          addEdge(adjacency_, conePts[a], conePts[b], scDistance(conePts[a], conePts[b]));
    }
    for (auto& lst : adjacency_) std::sort(lst.begin(), lst.end());
  }

  std::vector<std::size_t> conePointIndices(std::size_t cone) const {
    std::vector<std::size_t> pts;
    pts.push_back(apexIndex_[cone]);
    for (PointId v : family_[cone].members) {
      pts.push_back(baseIndex(v));
      for (std::size_t k = 0; k < interiorRadii_.size(); ++k)
        pts.push_back(interiorIndex(cone, v, k));
    }
    return pts;
  }

  void ensurePathGraph() const {
    if (!pathAdjacency_.empty() || points_.empty()) return;
    pathAdjacency_.assign(points_.size(), {});
    for (const WeightedGraph::Edge& e : oracle_.graph().edges)
      addEdge(pathAdjacency_, e.u, e.v, e.w);
    for (std::size_t i = 0; i < family_.size(); ++i) {
      const auto& mem = family_[i].members;
      // Radial segments.
      for (PointId v : mem) {
        std::size_t prev = apexIndex_[i];
        double prevR = 0.0;
        for (std::size_t k = 0; k < interiorRadii_.size(); ++k) {
          std::size_t cur = interiorIndex(i, v, k);
          addEdge(pathAdjacency_, prev, cur, interiorRadii_[k] - prevR);
          prev = cur;
          prevR = interiorRadii_[k];
        }
        addEdge(pathAdjacency_, prev, baseIndex(v), r0_ - prevR);
      }
      // Cross hops where a chosen base geodesic stays inside the member.
      for (std::size_t ai = 0; ai < mem.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < mem.size(); ++bi) {
          PointId y = mem[ai], yp = mem[bi];
          if (!geodesicInside(y, yp, family_[i]) && !geodesicInside(yp, y, family_[i])) continue;
          std::vector<std::size_t> ys = pointsOnFibre(i, y);
          std::vector<std::size_t> yps = pointsOnFibre(i, yp);
          for (std::size_t a : ys)
            for (std::size_t b : yps) addEdge(pathAdjacency_, a, b, scDistance(a, b));
        }
    }
    for (auto& lst : pathAdjacency_) std::sort(lst.begin(), lst.end());
  }

  bool geodesicInside(PointId s, PointId t, const Subspace& y) const {
    for (PointId u : oracle_.geodesic(s, t).vertices)
      if (!y.contains(u)) return false;
    return true;
  }

  std::vector<std::size_t> pointsOnFibre(std::size_t cone, PointId v) const {
    std::vector<std::size_t> pts{baseIndex(v)};
    for (std::size_t k = 0; k < interiorRadii_.size(); ++k)
      pts.push_back(interiorIndex(cone, v, k));
    return pts;
  }

  std::vector<double> dijkstra(const std::vector<std::vector<std::pair<std::size_t, double>>>& adj,
                               std::size_t source, std::vector<std::size_t>* parent) const {
    std::vector<double> dist(points_.size(), kInfinite);
    dist[source] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : adj[u]) {
        double nd = d + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          if (parent) (*parent)[v] = u;
          heap.emplace(nd, v);
        }
      }
    }
    return dist;
  }

  GeodesicOracle oracle_;
  std::vector<Subspace> family_;
  double r0_;
  std::size_t steps_;
  std::vector<ConeSpace> cones_;
  std::vector<ConeOffPoint> points_;
  std::vector<std::vector<std::size_t>> conesOf_;
  std::vector<std::size_t> apexIndex_;
  std::vector<std::size_t> interiorBegin_;
  std::vector<double> interiorRadii_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
  mutable std::vector<std::vector<std::pair<std::size_t, double>>> pathAdjacency_;
};

/// Ordered chain of materialized points.
struct Chain {
  std::vector<std::size_t> points;
};

inline double chain_length(const ConeOffSpace& space, const Chain& chain) {
  detail::require(chain.points.size() >= 2, "a chain needs at least two points");
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < chain.points.size(); ++j)
    total += space.scDistance(chain.points[j], chain.points[j + 1]);
  return total;
}

/// Normal form: strictly-conical points may be removed from the middle of a
/// chain without increasing its length (triangle inequality inside the
/// cone), leaving all intermediate points in the base.
inline Chain chain_normal_form(const ConeOffSpace& space, const Chain& chain) {
  detail::require(chain.points.size() >= 2, "a chain needs at least two points");
  Chain out;
  out.points.push_back(chain.points.front());
  for (std::size_t j = 1; j + 1 < chain.points.size(); ++j) {
    if (space.point(chain.points[j]).kind == ConeOffPoint::Kind::Base)
      out.points.push_back(chain.points[j]);
  }
  out.points.push_back(chain.points.back());
  return out;
}

/// Greedy subchain extraction: keep the first two points, then repeatedly
/// either jump to the farthest later point within base distance eta of the
/// current one (when the next gap is small) or advance by one, and finish at
/// the last point. Guarantees l(C_eta) <= l(C) + m*eta^3, and m <= 100*A/eta
/// whenever eta <= 1/4 and l(C) <= A + 1.
inline Chain chain_reduce(const ConeOffSpace& space, const Chain& chain, double eta) {
  detail::require(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  const auto& pts = chain.points;
  detail::require(pts.size() >= 2, "a chain needs at least two points");
  for (std::size_t j = 1; j + 1 < pts.size(); ++j)
    detail::require(space.point(pts[j]).kind == ConeOffPoint::Kind::Base,
                    "interior chain points must lie in the base; apply the normal form first");
  Chain out;
  const std::size_t n = pts.size();
  if (n == 2) {
    out.points = pts;
    return out;
  }
  auto gap = [&](std::size_t a, std::size_t b) {
    return space.base().at(space.point(pts[a]).vertex, space.point(pts[b]).vertex);
  };
  out.points.push_back(pts[0]);
  out.points.push_back(pts[1]);
  std::size_t jk = 1;
  while (jk != n - 1) {
    std::size_t next;
    if (jk == n - 2) {
      next = n - 1;
    } else if (gap(jk, jk + 1) > eta) {
      next = jk + 1;
    } else {
      next = jk + 1;
      for (std::size_t j = jk + 1; j <= n - 2; ++j)
        if (gap(jk, j) <= eta) next = j;
    }
    out.points.push_back(pts[next]);
    jk = next;
  }
  return out;
}

/// Explicit constants behind the uniform chain approximation: a chain of
/// length at most A admits an eta-subchain with error epsilon using
/// eta = sqrt(epsilon / 2A) / 10 and at most 1000*A*sqrt(2A/epsilon) points.
struct UniformChainBound {
  double eta = 0.0;
  double max_points = 0.0;
};

inline UniformChainBound uniform_chain_bound(double A, double epsilon) {
  detail::require(A >= 1.0, "A must be at least 1");
  detail::require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  UniformChainBound out;
  out.eta = 0.1 * std::sqrt(epsilon / (2.0 * A));
  out.max_points = 1000.0 * A * std::sqrt(2.0 * A / epsilon);
  return out;
}

/// Sampled audit of the gap between the length-metric proxy and the chain
/// metric, reported against the 40*delta envelope.
struct PathMetricGapReport {
  double max_gap = 0.0;
  double bound = 0.0;  // 40 * delta of the base
  double base_delta = 0.0;
  bool family_strongly_quasiconvex = true;
  std::size_t pairs = 0;
};

inline PathMetricGapReport path_metric_gap(const ConeOffSpace& space,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& sample) {
  PathMetricGapReport out;
  DeltaResult delta = four_point_delta(space.base());
  out.base_delta = delta.delta;
  out.bound = 40.0 * delta.delta;
  for (const Subspace& y : space.family())
    if (!is_strongly_quasiconvex(space.oracle(), y, delta.delta).holds)
      out.family_strongly_quasiconvex = false;
  for (auto [a, b] : sample) {
    std::vector<double> path = space.pathStyleDistancesFrom(a);
    std::vector<double> chain = space.chainDistancesFrom(a);
    out.max_gap = std::max(out.max_gap, path[b] - chain[b]);
    ++out.pairs;
  }
  return out;
}

}  // namespace conekit
