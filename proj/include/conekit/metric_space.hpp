#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conekit {

using PointId = std::size_t;

/// A permutation of the points of a space, stored as its image table.
using Permutation = std::vector<PointId>;

/// Global comparison slack: every inequality assertion in the toolkit
/// absorbs floating-point rounding through this constant.
inline constexpr double kSlack = 1e-9;

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail

/// Finite metric space backed by a dense symmetric distance matrix.
///
/// Construction validates the metric axioms (zero diagonal, symmetry,
/// positivity off the diagonal, triangle inequality for every triple).
/// The O(n^3) triangle scan can be disabled for closures that are metrics
/// by construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() : n_(0) {}

  FiniteMetricSpace(std::size_t n, std::vector<double> dist, bool validate = true)
      : n_(n), dist_(std::move(dist)) {
    detail::require(dist_.size() == n_ * n_, "distance matrix has wrong size");
    if (validate) validateMetric();
  }

  std::size_t size() const { return n_; }

  double distance(PointId a, PointId b) const {
    checkPoint(a);
    checkPoint(b);
    return dist_[a * n_ + b];
  }

  /// Unchecked access for hot loops.
  double at(PointId a, PointId b) const { return dist_[a * n_ + b]; }

  const std::vector<double>& raw() const { return dist_; }

  double diameter() const {
    double d = 0.0;
    for (double v : dist_) d = std::max(d, v);
    return d;
  }

  /// Smallest strictly positive distance; 0 when fewer than two points.
  double minPositiveDistance() const {
    double d = kInfinite;
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = a + 1; b < n_; ++b) d = std::min(d, at(a, b));
    return n_ < 2 ? 0.0 : d;
  }

  void checkPoint(PointId p) const {
    if (p >= n_) throw std::out_of_range("point index " + std::to_string(p) + " out of range");
  }

  /// Full metric-axiom validation. Throws std::invalid_argument naming the
  /// first offending triple.
  void validateMetric() const {
    for (PointId a = 0; a < n_; ++a) {
      detail::require(at(a, a) == 0.0, "dist(" + std::to_string(a) + "," + std::to_string(a) + ") must be 0");
      for (PointId b = 0; b < n_; ++b) {
        double d = at(a, b);
        detail::require(std::isfinite(d) && d >= 0.0, "distances must be finite and non-negative");
        detail::require(std::abs(d - at(b, a)) <= kSlack, "distance matrix must be symmetric");
        if (a != b) detail::require(d > 0.0, "distinct points at distance 0: " + std::to_string(a) + "," + std::to_string(b));
      }
    }
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = 0; b < n_; ++b)
        for (PointId c = 0; c < n_; ++c)
          detail::require(at(a, c) <= at(a, b) + at(b, c) + kSlack,
                          "triangle inequality fails on (" + std::to_string(a) + "," +
                              std::to_string(b) + "," + std::to_string(c) + ")");
  }

  bool operator==(const FiniteMetricSpace& o) const { return n_ == o.n_ && dist_ == o.dist_; }

 private:
  std::size_t n_;
  std::vector<double> dist_;
};

/// Restriction of a metric to a subset of points, in the order given.
inline FiniteMetricSpace restrictTo(const FiniteMetricSpace& space,
                                    const std::vector<PointId>& members) {
  std::size_t m = members.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) d[i * m + j] = space.distance(members[i], members[j]);
  return FiniteMetricSpace(m, std::move(d), false);
}

/// Connected weighted graph; its induced metric is the all-pairs
/// shortest-path closure of the edge weights.
struct WeightedGraph {
  struct Edge {
    PointId u = 0;
    PointId v = 0;
    double w = 0.0;
  };

  std::size_t n = 0;
  std::vector<Edge> edges;

  WeightedGraph() = default;
  WeightedGraph(std::size_t vertices, std::vector<Edge> es) : n(vertices), edges(std::move(es)) {
    validate();
  }

  void validate() const {
    for (const Edge& e : edges) {
      detail::require(e.u < n && e.v < n, "edge endpoint out of range");
      detail::require(e.u != e.v, "self-loops are not allowed");
      detail::require(std::isfinite(e.w) && e.w > 0.0, "edge weights must be strictly positive");
    }
    detail::require(connected(), "graph must be connected");
  }

  bool connected() const {
    if (n == 0) return true;
    std::vector<std::vector<PointId>> adj(n);
    for (const Edge& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(n, 0);
    std::vector<PointId> stack{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      PointId u = stack.back();
      stack.pop_back();
      for (PointId v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++cnt;
          stack.push_back(v);
        }
    }
    return cnt == n;
  }

  /// Neighbour lists sorted by vertex id (the deterministic scan order).
  std::vector<std::vector<std::pair<PointId, double>>> adjacency() const {
    std::vector<std::vector<std::pair<PointId, double>>> adj(n);
    for (const Edge& e : edges) {
      adj[e.u].emplace_back(e.v, e.w);
      adj[e.v].emplace_back(e.u, e.w);
    }
    for (auto& lst : adj) std::sort(lst.begin(), lst.end());
    return adj;
  }

  std::vector<double> shortestPathsFrom(
      PointId source, const std::vector<std::vector<std::pair<PointId, double>>>& adj) const {
    std::vector<double> dist(n, kInfinite);
    dist[source] = 0.0;
    using Item = std::pair<double, PointId>;
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
          heap.emplace(nd, v);
        }
      }
    }
    return dist;
  }

  /// All-pairs shortest-path closure. The result is a metric by
  /// construction, so validation defaults to off.
  FiniteMetricSpace inducedMetric(bool validate = false) const {
    auto adj = adjacency();
    std::vector<double> d(n * n, 0.0);
    for (PointId s = 0; s < n; ++s) {
      std::vector<double> row = shortestPathsFrom(s, adj);
      for (PointId t = 0; t < n; ++t) d[s * n + t] = row[t];
    }
    return FiniteMetricSpace(n, std::move(d), validate);
  }
};

/// Shortest vertex path realizing the graph distance between its endpoints.
struct DiscreteGeodesic {
  std::vector<PointId> vertices;
  double length = 0.0;
};

/// Deterministic geodesic chooser: for every ordered pair (s, t) the oracle
/// returns the lexicographically smallest shortest vertex path from s to t.
/// All geodesic-dependent constants in the toolkit are relative to this
/// fixed choice; reports label them "fixed-geodesic".
class GeodesicOracle {
 public:
  explicit GeodesicOracle(WeightedGraph graph)
      : graph_(std::move(graph)), adj_(graph_.adjacency()), metric_(graph_.inducedMetric(false)) {}

  const WeightedGraph& graph() const { return graph_; }
  const FiniteMetricSpace& metric() const { return metric_; }
  std::size_t size() const { return graph_.n; }

  /// Greedy front extension: from the current vertex move to the smallest
  /// neighbour that stays on a shortest path to t. This yields the
  /// lexicographically smallest shortest path.
  DiscreteGeodesic geodesic(PointId s, PointId t) const {
    metric_.checkPoint(s);
    metric_.checkPoint(t);
    DiscreteGeodesic geo;
    geo.vertices.push_back(s);
    PointId cur = s;
    while (cur != t) {
      bool advanced = false;
      for (auto [v, w] : adj_[cur]) {
        if (std::abs(metric_.at(cur, t) - (w + metric_.at(v, t))) <= kSlack) {
          geo.vertices.push_back(v);
          geo.length += w;
          cur = v;
          advanced = true;
          break;
        }
      }
      if (!advanced) throw std::logic_error("geodesic extension failed; inconsistent metric");
    }
    return geo;
  }

 private:
  WeightedGraph graph_;
  std::vector<std::vector<std::pair<PointId, double>>> adj_;
  FiniteMetricSpace metric_;
};

}  // namespace conekit
