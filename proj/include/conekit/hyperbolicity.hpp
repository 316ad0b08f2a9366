#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "conekit/metric_space.hpp"

namespace conekit {

/// Gromov product (y, z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2.
inline double gromov_product(const FiniteMetricSpace& space, PointId y, PointId z, PointId base) {
  space.checkPoint(y);
  space.checkPoint(z);
  space.checkPoint(base);
  return 0.5 * (space.at(base, y) + space.at(base, z) - space.at(y, z));
}

/// Result of a four-point hyperbolicity scan. `exact` records whether all
/// n^4 ordered quadruples were visited or only `samples` random ones.
struct DeltaResult {
  double delta = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Largest defect min((x,y)_t, (y,z)_t) - (x,z)_t over quadruples with the
/// given base points. Products for the fixed base are tabulated once.
inline double fourPointScanForBases(const FiniteMetricSpace& space, std::size_t tBegin,
                                    std::size_t tEnd) {
  const std::size_t n = space.size();
  std::vector<double> gro(n * n);
  double worst = 0.0;
  for (PointId t = tBegin; t < tEnd; ++t) {
    for (PointId x = 0; x < n; ++x) {
      double dtx = space.at(t, x);
      for (PointId y = 0; y < n; ++y)
        gro[x * n + y] = 0.5 * (dtx + space.at(t, y) - space.at(x, y));
    }
    for (PointId x = 0; x < n; ++x) {
      const double* gx = gro.data() + x * n;
      for (PointId y = 0; y < n; ++y) {
        double gxy = gx[y];
        const double* gy = gro.data() + y * n;
        for (PointId z = 0; z < n; ++z) {
          double defect = std::min(gxy, gy[z]) - gx[z];
          if (defect > worst) worst = defect;
        }
      }
    }
  }
  return worst;
}

}  // namespace detail

/// Exact four-point constant: smallest delta such that
/// (x,z)_t >= min((x,y)_t, (y,z)_t) - delta over all ordered quadruples.
inline DeltaResult four_point_delta_exact(const FiniteMetricSpace& space, unsigned threads = 1) {
  const std::size_t n = space.size();
  DeltaResult out;
  out.exact = true;
  if (n < 2) return out;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    out.delta = std::max(0.0, detail::fourPointScanForBases(space, 0, n));
    return out;
  }
  std::vector<double> partial(threads, 0.0);
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    std::size_t lo = std::min<std::size_t>(k * chunk, n);
    std::size_t hi = std::min<std::size_t>(lo + chunk, n);
    pool.emplace_back([&space, &partial, k, lo, hi] {
      partial[k] = detail::fourPointScanForBases(space, lo, hi);
    });
  }
  for (auto& th : pool) th.join();
  out.delta = std::max(0.0, *std::max_element(partial.begin(), partial.end()));
  return out;
}

/// Sampled four-point constant over `samples` seeded random quadruples.
/// A lower bound for the exact constant; mode and seed are recorded.
inline DeltaResult four_point_delta_sampled(const FiniteMetricSpace& space, std::uint64_t samples,
                                            std::uint64_t seed) {
  const std::size_t n = space.size();
  DeltaResult out;
  out.exact = false;
  out.samples = samples;
  out.seed = seed;
  if (n < 2) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double worst = 0.0;
  for (std::uint64_t it = 0; it < samples; ++it) {
    PointId t = pick(rng), x = pick(rng), y = pick(rng), z = pick(rng);
    double gxy = gromov_product(space, x, y, t);
    double gyz = gromov_product(space, y, z, t);
    double gxz = gromov_product(space, x, z, t);
    worst = std::max(worst, std::min(gxy, gyz) - gxz);
  }
  out.delta = std::max(0.0, worst);
  return out;
}

/// Space size above which the exact n^4 scan gives way to sampling.
inline constexpr std::size_t kExactDeltaLimit = 150;
inline constexpr std::uint64_t kDefaultDeltaSamples = 1000000;

/// Exact scan for n <= kExactDeltaLimit, sampled otherwise.
inline DeltaResult four_point_delta(const FiniteMetricSpace& space, unsigned threads = 1,
                                    std::uint64_t samples = kDefaultDeltaSamples,
                                    std::uint64_t seed = 1) {
  if (space.size() <= kExactDeltaLimit) return four_point_delta_exact(space, threads);
  return four_point_delta_sampled(space, samples, seed);
}

/// Fixed-geodesic thinness constant: smallest tau such that for every vertex
/// triple, each chosen side lies in the tau-neighbourhood of the union of
/// the other two chosen sides.
inline double thin_triangle_constant(const GeodesicOracle& oracle) {
  const FiniteMetricSpace& space = oracle.metric();
  const std::size_t n = space.size();
  double tau = 0.0;
  auto sideGap = [&](const std::vector<PointId>& side, const std::vector<PointId>& other1,
                     const std::vector<PointId>& other2) {
    double worst = 0.0;
    for (PointId u : side) {
      double best = kInfinite;
      for (PointId v : other1) best = std::min(best, space.at(u, v));
      for (PointId v : other2) best = std::min(best, space.at(u, v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b) {
      std::vector<PointId> ab = oracle.geodesic(a, b).vertices;
      for (PointId c = b + 1; c < n; ++c) {
        std::vector<PointId> ac = oracle.geodesic(a, c).vertices;
        std::vector<PointId> bc = oracle.geodesic(b, c).vertices;
        tau = std::max(tau, sideGap(ab, ac, bc));
        tau = std::max(tau, sideGap(ac, ab, bc));
        tau = std::max(tau, sideGap(bc, ab, ac));
      }
    }
  return tau;
}

/// Additive defect of a map f : X -> Y, i.e. the smallest eta with
/// d_X(x,x') - eta <= d_Y(f x, f x') <= d_X(x,x') + eta for all pairs.
inline double quasi_isometry_defect(std::span<const PointId> f, const FiniteMetricSpace& domain,
                                    const FiniteMetricSpace& target) {
  detail::require(f.size() == domain.size(), "map must be total on the domain");
  for (PointId img : f) target.checkPoint(img);
  double eta = 0.0;
  for (PointId a = 0; a < domain.size(); ++a)
    for (PointId b = a + 1; b < domain.size(); ++b)
      eta = std::max(eta, std::abs(domain.at(a, b) - target.at(f[a], f[b])));
  return eta;
}

}  // namespace conekit
