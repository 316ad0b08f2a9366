#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conekit/metric_space.hpp"
#include "conekit/workspace.hpp"

namespace conekit {

/// N points on a circle of perimeter 2*pi*sinh(r0), carrying the arc
/// metric: the cone over this space is the hyperbolic disc of radius r0.
inline WorkspaceDocument demo_circle(std::size_t n, double r0) {
  detail::require(n >= 3, "circle demo needs at least 3 points");
  detail::require(r0 > 0.0, "cone radius must be positive");
  WorkspaceDocument doc;
  doc.points = n;
  double perimeter = 2.0 * std::numbers::pi * std::sinh(r0);
  double step = perimeter / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    doc.edges.push_back({i, (i + 1) % n, step});
  doc.params.emplace_back("r0", r0);
  return doc;
}

/// Random tree with a family of subtrees sharing pairwise at most one
/// vertex, attached to the trivial rotation group. Used as the pass case of
/// the small-cancellation pipeline (delta = 0, Delta = 0).
inline WorkspaceDocument demo_tree_family(std::uint64_t seed, const std::vector<std::size_t>& sizes,
                                          std::size_t vertices = 0) {
  detail::require(!sizes.empty(), "need at least one subtree size");
  for (std::size_t s : sizes) detail::require(s >= 1, "subtree sizes must be positive");
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  std::size_t n = vertices ? vertices : 2 * total + 2;
  detail::require(n >= total, "tree too small for the requested subtrees");
  std::mt19937_64 rng(seed);

  WorkspaceDocument doc;
  doc.points = n;
  std::vector<std::vector<PointId>> adj(n);
  for (PointId v = 1; v < n; ++v) {
    PointId parent = rng() % v;
    doc.edges.push_back({parent, v, 1.0});
    adj[parent].push_back(v);
    adj[v].push_back(parent);
  }

  // Grow each subtree over tree edges, touching previously used vertices at
  // most once so that members pairwise share at most one vertex.
  std::set<PointId> used;
  std::size_t emitted = 0;
  for (std::size_t s : sizes) {
    std::vector<PointId> best;
    for (int attempt = 0; attempt < 32 && best.size() < s; ++attempt) {
      PointId start = rng() % n;
      std::set<PointId> cur{start};
      std::size_t usedCount = used.count(start) ? 1 : 0;
      while (cur.size() < s) {
        std::vector<PointId> candidates;
        for (PointId u : cur)
          for (PointId v : adj[u])
            if (!cur.count(v) && (!used.count(v) || usedCount == 0)) candidates.push_back(v);
        if (candidates.empty()) break;
        PointId pick = candidates[rng() % candidates.size()];
        if (used.count(pick)) ++usedCount;
        cur.insert(pick);
      }
      if (cur.size() > best.size()) best.assign(cur.begin(), cur.end());
    }
    detail::require(!best.empty(), "failed to grow a subtree");
    used.insert(best.begin(), best.end());
    doc.subspaces.emplace_back("T" + std::to_string(emitted), best);
    ++emitted;
  }

  Permutation id(n);
  for (PointId x = 0; x < n; ++x) id[x] = x;
  doc.generators.emplace_back("id", std::move(id));
  for (std::size_t i = 0; i < emitted; ++i) {
    RotationDecl decl;
    decl.index = i;
    decl.subspace = "T" + std::to_string(i);
    decl.subgroup_words = {"id"};
    decl.images["id"] = i;
    doc.rotations.push_back(std::move(decl));
  }
  doc.params.emplace_back("r0", 1.0);
  // Illustrative demo thresholds, not derived from any computed constant.
  doc.params.emplace_back("delta0", 0.01);
  doc.params.emplace_back("Delta0", 0.1);
  doc.params.emplace_back("epsilon", 0.05);
  doc.params.emplace_back("cap", 12.0);
  return doc;
}

/// Checks that a word over a, b, A, B is freely and cyclically reduced.
inline void check_cyclically_reduced(const std::string& relator) {
  detail::require(!relator.empty(), "relator must be non-empty");
  auto inverseOf = [](char c) -> char {
    switch (c) {
      case 'a': return 'A';
      case 'A': return 'a';
      case 'b': return 'B';
      case 'B': return 'b';
      default: throw std::invalid_argument("relator letters must be one of a, b, A, B");
    }
  };
  for (char c : relator) (void)inverseOf(c);
  for (std::size_t i = 0; i + 1 < relator.size(); ++i)
    detail::require(relator[i + 1] != inverseOf(relator[i]), "relator is not freely reduced");
  detail::require(relator.size() == 1 || relator.back() != inverseOf(relator.front()),
                  "relator is not cyclically reduced");
}

/// Finite stand-in for the Cayley ball of F(a,b) around the axis of a
/// cyclically reduced relator: a window of the tree around the axis,
/// periodified along the axis so that translation by the relator acts as an
/// honest isometric permutation. The translation shifts the axis by the
/// relator length, the attached subgroup is the cyclic group it generates,
/// and the strip leaves (the truncation boundary) are declared so that
/// boundary-realized minima can be flagged.
inline WorkspaceDocument demo_free_group_ball(std::size_t radius, const std::string& relator) {
  detail::require(radius >= 1, "ball radius must be at least 1");
  check_cyclically_reduced(relator);
  const std::size_t ell = relator.size();
  const std::size_t periods = std::max<std::size_t>(2, (2 * radius + 1 + ell - 1) / ell);
  const std::size_t P = periods * ell;  // axis circumference
  const std::size_t depth = std::min<std::size_t>(2, radius);

  WorkspaceDocument doc;
  std::size_t n = P;
  std::size_t depth1Base = P;
  std::size_t depth2Base = P + 2 * P;
  if (depth >= 1) n += 2 * P;
  if (depth >= 2) n += 6 * P;
  doc.points = n;

  auto depth1 = [&](std::size_t c, std::size_t d1) { return depth1Base + c * 2 + d1; };
  auto depth2 = [&](std::size_t c, std::size_t d1, std::size_t d2) {
    return depth2Base + (c * 2 + d1) * 3 + d2;
  };

  for (std::size_t c = 0; c < P; ++c) doc.edges.push_back({c, (c + 1) % P, 1.0});
  if (depth >= 1)
    for (std::size_t c = 0; c < P; ++c)
      for (std::size_t d1 = 0; d1 < 2; ++d1) doc.edges.push_back({c, depth1(c, d1), 1.0});
  if (depth >= 2)
    for (std::size_t c = 0; c < P; ++c)
      for (std::size_t d1 = 0; d1 < 2; ++d1)
        for (std::size_t d2 = 0; d2 < 3; ++d2)
          doc.edges.push_back({depth1(c, d1), depth2(c, d1, d2), 1.0});

  Permutation rot(n);
  for (std::size_t c = 0; c < P; ++c) {
    std::size_t cc = (c + ell) % P;
    rot[c] = cc;
    if (depth >= 1)
      for (std::size_t d1 = 0; d1 < 2; ++d1) rot[depth1(c, d1)] = depth1(cc, d1);
    if (depth >= 2)
      for (std::size_t d1 = 0; d1 < 2; ++d1)
        for (std::size_t d2 = 0; d2 < 3; ++d2) rot[depth2(c, d1, d2)] = depth2(cc, d1, d2);
  }
  doc.generators.emplace_back("rot", std::move(rot));

  std::vector<PointId> axis(P);
  for (std::size_t c = 0; c < P; ++c) axis[c] = c;
  doc.subspaces.emplace_back("axis", std::move(axis));

  if (depth == 1)
    for (std::size_t c = 0; c < P; ++c)
      for (std::size_t d1 = 0; d1 < 2; ++d1) doc.boundary.push_back(depth1(c, d1));
  if (depth >= 2)
    for (std::size_t c = 0; c < P; ++c)
      for (std::size_t d1 = 0; d1 < 2; ++d1)
        for (std::size_t d2 = 0; d2 < 3; ++d2) doc.boundary.push_back(depth2(c, d1, d2));

  RotationDecl decl;
  decl.index = 0;
  decl.subspace = "axis";
  decl.subgroup_words = {"rot"};
  decl.images["rot"] = 0;
  doc.rotations.push_back(std::move(decl));

  doc.params.emplace_back("r0", 1.0);
  doc.params.emplace_back("delta0", 0.01);
  doc.params.emplace_back("Delta0", 0.1);
  doc.params.emplace_back("epsilon", 0.05);
  doc.params.emplace_back("cap", 12.0);
  return doc;
}

}  // namespace conekit
