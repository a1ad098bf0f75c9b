#include "ssdo/traffic.hpp"

#include <cmath>

#include "ssdo/rng.hpp"

namespace ssdo {

DemandMatrix gravity_demands(const Topology& topology, double total_volume,
                             std::uint64_t seed, const GravityOptions& options) {
  if (!(total_volume > 0.0))
    throw InvariantViolation("total volume must be positive");
  const int n = topology.node_count();
  if (n < 2) throw InvariantViolation("gravity model needs at least 2 nodes");

  // Node mass: total capacity incident to the node, in and out.
  std::vector<double> weight(n, 0.0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || !topology.has_edge(i, j)) continue;
      double c = topology.unbounded(i, j) ? options.unbounded_edge_weight
                                          : topology.capacity(i, j);
      weight[i] += c;
      weight[j] += c;
    }

  DemandMatrix demands(n);
  std::vector<double> raw(static_cast<std::size_t>(n) * n, 0.0);
  double mass = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      raw[static_cast<std::size_t>(i) * n + j] = weight[i] * weight[j];
      mass += weight[i] * weight[j];
    }
  if (mass <= 0.0)
    throw DegenerateWeightsError("every node weight is zero");

  if (options.noise_sigma > 0.0) {
    auto rng = make_rng(seed, "gravity-noise");
    std::normal_distribution<double> normal(0.0, 1.0);
    mass = 0.0;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        double& r = raw[static_cast<std::size_t>(i) * n + j];
        r *= std::exp(options.noise_sigma * normal(rng));
        mass += r;
      }
  }

  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j)
        demands.set(i, j, total_volume * raw[static_cast<std::size_t>(i) * n + j] / mass);
  return demands;
}

DemandSeries perturb_series(const DemandSeries& series, double scale,
                            std::uint64_t seed) {
  if (!(scale > 0.0)) throw InvariantViolation("scale must be positive");
  const std::size_t steps = series.snapshots.size();
  if (steps < 2)
    throw InvariantViolation("perturbation needs at least two snapshots");
  const int n = series.snapshots.front().node_count();
  for (const DemandMatrix& m : series.snapshots)
    if (m.node_count() != n)
      throw InvariantViolation("series snapshots disagree on dimensions");

  DemandSeries out = series;
  auto rng = make_rng(seed, "perturb");
  std::normal_distribution<double> normal(0.0, 1.0);

  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      // Changes are modeled as zero-mean, so the variance is the mean
      // squared first difference.
      double sq = 0.0;
      for (std::size_t t = 0; t + 1 < steps; ++t) {
        double diff = series.snapshots[t + 1].at(i, j) - series.snapshots[t].at(i, j);
        sq += diff * diff;
      }
      double sigma = std::sqrt(scale * sq / static_cast<double>(steps - 1));
      if (sigma == 0.0) continue;
      for (std::size_t t = 0; t < steps; ++t) {
        double v = series.snapshots[t].at(i, j) + sigma * normal(rng);
        out.snapshots[t].set(i, j, v < 0.0 ? 0.0 : v);
      }
    }
  return out;
}

}  // namespace ssdo
