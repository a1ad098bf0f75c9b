#pragma once

#include <cstdint>

#include "ssdo/demand.hpp"
#include "ssdo/topology.hpp"

namespace ssdo {

struct GravityOptions {
  /// Weight contributed to a node by each incident unbounded edge.
  double unbounded_edge_weight = 1e6;
  /// Standard deviation of optional multiplicative lognormal noise; 0 keeps
  /// the plain gravity model.
  double noise_sigma = 0.0;
};

/// Gravity-model demand matrix: D_ij proportional to w_i * w_j with node
/// weight w_i the total capacity incident to i, rescaled to sum to
/// total_volume. Deterministic given the seed (the seed only feeds the
/// optional noise mode). Throws DegenerateWeightsError when no pair has
/// positive weight product.
DemandMatrix gravity_demands(const Topology& topology, double total_volume,
                             std::uint64_t seed,
                             const GravityOptions& options = {});

/// Adds zero-mean normal noise to every snapshot. Per pair, the noise
/// variance is `scale` times the mean squared first difference across
/// consecutive snapshots; negative results clamp to zero. Deterministic
/// given the seed.
DemandSeries perturb_series(const DemandSeries& series, double scale,
                            std::uint64_t seed);

}  // namespace ssdo
