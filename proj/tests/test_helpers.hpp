#pragma once

#include <random>
#include <vector>

#include "conekit/metric_space.hpp"

namespace conekit::testing {

inline WeightedGraph pathGraph(std::size_t n, double w = 1.0) {
  std::vector<WeightedGraph::Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph cycleGraph(std::size_t n, double w = 1.0) {
  std::vector<WeightedGraph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph gridGraph(std::size_t rows, std::size_t cols, double w = 1.0) {
  std::vector<WeightedGraph::Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), w});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), w});
    }
  return WeightedGraph(rows * cols, std::move(edges));
}

/// Random tree via random attachment; weights in [lo, hi].
inline WeightedGraph randomTree(std::size_t n, std::mt19937_64& rng, double lo = 1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> weight(lo, hi);
  std::vector<WeightedGraph::Edge> edges;
  for (std::size_t v = 1; v < n; ++v)
    edges.push_back({rng() % v, v, lo == hi ? lo : weight(rng)});
  return WeightedGraph(n, std::move(edges));
}

/// Random connected weighted graph: a random tree plus `extra` random
/// chords, weights in [lo, hi].
inline WeightedGraph randomConnectedGraph(std::size_t n, std::size_t extra, std::mt19937_64& rng,
                                          double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> weight(lo, hi);
  std::vector<WeightedGraph::Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.push_back({rng() % v, v, weight(rng)});
  for (std::size_t k = 0; k < extra; ++k) {
    PointId u = rng() % n, v = rng() % n;
    if (u == v) continue;
    edges.push_back({u, v, weight(rng)});
  }
  return WeightedGraph(n, std::move(edges));
}

}  // namespace conekit::testing
