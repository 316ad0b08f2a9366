#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conekit/metric_space.hpp"

namespace conekit {

/// Rips complex of a finite metric space at scale d: the simplices are the
/// vertex subsets of diameter strictly less than d (the boundary case
/// "exactly d" is excluded; reports print the convention). Built as the
/// clique complex of the d-neighbourhood graph, up to a dimension cap.
struct RipsComplex {
  double scale = 0.0;
  std::size_t maxdim = 0;
  /// simplices[k] lists the k-simplices as sorted vertex tuples, in
  /// lexicographic order.
  std::vector<std::vector<std::vector<PointId>>> simplices;

  std::size_t count(std::size_t dim) const {
    return dim < simplices.size() ? simplices[dim].size() : 0;
  }

  std::size_t totalCount() const {
    std::size_t n = 0;
    for (const auto& dim : simplices) n += dim.size();
    return n;
  }

  long long eulerCharacteristic() const {
    long long chi = 0;
    for (std::size_t k = 0; k < simplices.size(); ++k)
      chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(simplices[k].size());
    return chi;
  }
};

inline constexpr std::size_t kRipsSimplexCap = 500000;

/// Clique expansion with pruning; throws std::overflow_error past the
/// simplex cap.
inline RipsComplex build_rips(const FiniteMetricSpace& space, double d, std::size_t maxdim) {
  detail::require(d > 0.0, "Rips scale must be positive");
  const std::size_t n = space.size();
  RipsComplex out;
  out.scale = d;
  out.maxdim = maxdim;
  out.simplices.resize(maxdim + 1);
  std::size_t total = 0;
  auto push = [&](std::size_t dim, std::vector<PointId> simplex) {
    if (++total > kRipsSimplexCap)
      throw std::overflow_error("Rips complex exceeds " + std::to_string(kRipsSimplexCap) +
                                " simplices");
    out.simplices[dim].push_back(std::move(simplex));
  };
  for (PointId v = 0; v < n; ++v) push(0, {v});
  std::vector<std::vector<PointId>> higherNeighbours(n);
  for (PointId u = 0; u < n; ++u)
    for (PointId v = u + 1; v < n; ++v)
      if (space.at(u, v) < d) higherNeighbours[u].push_back(v);
  for (std::size_t dim = 1; dim <= maxdim; ++dim) {
    const auto& below = out.simplices[dim - 1];
    for (const auto& simplex : below) {
      for (PointId v : higherNeighbours[simplex.back()]) {
        bool clique = true;
        for (PointId u : simplex)
          if (!(space.at(u, v) < d)) {
            clique = false;
            break;
          }
        if (!clique) continue;
        std::vector<PointId> bigger = simplex;
        bigger.push_back(v);
        push(dim, std::move(bigger));
      }
    }
    if (out.simplices[dim].empty()) break;
  }
  return out;
}

namespace detail {

/// GF(2) rank of the boundary operator from dimension k to k-1.
inline std::size_t boundaryRank(const RipsComplex& K, std::size_t k) {
  if (k == 0 || K.count(k) == 0) return 0;
  const auto& rows = K.simplices[k - 1];
  const auto& cols = K.simplices[k];
  std::map<std::vector<PointId>, std::size_t> rowIndex;
  for (std::size_t i = 0; i < rows.size(); ++i) rowIndex[rows[i]] = i;
  const std::size_t words = (rows.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> pivots;  // reduced columns
  std::vector<std::size_t> pivotBit;
  std::size_t rank = 0;
  std::vector<std::uint64_t> col(words);
  for (const auto& simplex : cols) {
    std::fill(col.begin(), col.end(), 0);
    std::vector<PointId> face(simplex.size() - 1);
    for (std::size_t drop = 0; drop < simplex.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < simplex.size(); ++i)
        if (i != drop) face[w++] = simplex[i];
      std::size_t r = rowIndex.at(face);
      col[r / 64] ^= (std::uint64_t{1} << (r % 64));
    }
    // Reduce against existing pivots.
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      std::size_t bit = pivotBit[p];
      if (col[bit / 64] & (std::uint64_t{1} << (bit % 64)))
        for (std::size_t w = 0; w < words; ++w) col[w] ^= pivots[p][w];
    }
    std::size_t lead = rows.size();
    for (std::size_t w = 0; w < words && lead == rows.size(); ++w)
      if (col[w]) {
        std::uint64_t bits = col[w];
        std::size_t b = 0;
        while (!(bits & 1)) {
          bits >>= 1;
          ++b;
        }
        lead = w * 64 + b;
      }
    if (lead != rows.size()) {
      pivots.push_back(col);
      pivotBit.push_back(lead);
      ++rank;
    }
  }
  return rank;
}

}  // namespace detail

/// Mod-2 Betti numbers b_0..b_up_to. Requires up_to <= maxdim - 1 so the
/// boundary operator one dimension above the last requested is available.
inline std::vector<std::size_t> betti_numbers(const RipsComplex& K, std::size_t up_to) {
  detail::require(K.maxdim >= 1 && up_to + 1 <= K.maxdim,
                  "betti_numbers needs boundaries one dimension above the request");
  std::vector<std::size_t> ranks(up_to + 2, 0);
  for (std::size_t k = 1; k <= up_to + 1; ++k) ranks[k] = detail::boundaryRank(K, k);
  std::vector<std::size_t> betti(up_to + 1, 0);
  for (std::size_t k = 0; k <= up_to; ++k) {
    std::size_t cycles = K.count(k) - ranks[k];
    betti[k] = cycles - ranks[k + 1];
  }
  return betti;
}

/// Checks del(del(simplex)) = 0 for every simplex, dimension by dimension.
inline bool boundary_squares_to_zero(const RipsComplex& K) {
  for (std::size_t k = 2; k < K.simplices.size(); ++k) {
    for (const auto& simplex : K.simplices[k]) {
      // Each (k-2)-face appears in exactly two (k-1)-faces, cancelling mod 2.
      std::map<std::vector<PointId>, int> counts;
      std::vector<PointId> face(simplex.size() - 1);
      for (std::size_t drop = 0; drop < simplex.size(); ++drop) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < simplex.size(); ++i)
          if (i != drop) face[w++] = simplex[i];
        std::vector<PointId> sub(face.size() - 1);
        for (std::size_t drop2 = 0; drop2 < face.size(); ++drop2) {
          std::size_t v = 0;
          for (std::size_t i = 0; i < face.size(); ++i)
            if (i != drop2) sub[v++] = face[i];
          counts[sub] ^= 1;
        }
      }
      for (const auto& [sub, parity] : counts)
        if (parity != 0) return false;
    }
  }
  return true;
}

/// Homological proxy for n-connectedness: builds the Rips complex at scale d
/// (default 4*delta plus the smallest positive distance) up to dimension
/// n+1 and reports the reduced Betti numbers b~_0..b~_n. Passing is a
/// necessary condition only; triviality of the fundamental group is not
/// certified.
struct ConnectednessCertificate {
  double scale = 0.0;
  std::size_t n = 0;
  std::vector<std::size_t> reduced_betti;
  bool pass = false;
  std::string convention = "simplices have diameter < d (strict)";
  std::string caveat = "necessary condition only; pi_1-triviality is not certified";
};

inline ConnectednessCertificate connectedness_certificate(const FiniteMetricSpace& space,
                                                          double delta, std::size_t n,
                                                          double d = 0.0) {
  detail::require(delta >= 0.0, "delta must be non-negative");
  detail::require(space.size() >= 1, "space must be non-empty");
  ConnectednessCertificate out;
  out.n = n;
  // Default scale: 4*delta plus the smallest positive distance. Simplices
  // use a strict diameter bound, so the default is nudged upwards to keep
  // the finest-scale pairs inside.
  double fallbackStep = space.size() < 2 ? 1.0 : space.minPositiveDistance();
  out.scale = d > 0.0 ? d : 4.0 * delta + fallbackStep * (1.0 + kSlack) + kSlack;
  detail::require(out.scale > 0.0, "Rips scale must be positive");
  RipsComplex K = build_rips(space, out.scale, n + 1);
  if (space.size() == 1) {
    out.reduced_betti.assign(n + 1, 0);
    out.pass = true;
    return out;
  }
  std::vector<std::size_t> betti = betti_numbers(K, n);
  out.reduced_betti = betti;
  out.reduced_betti[0] = betti[0] - 1;
  out.pass = true;
  for (std::size_t b : out.reduced_betti)
    if (b != 0) out.pass = false;
  return out;
}

}  // namespace conekit
