#include "ssdo/fixtures.hpp"

namespace ssdo {

RingFixture ring_deadlock_fixture(int n) {
  if (n < 5) throw InvariantViolation("ring fixture needs at least 5 nodes");

  Topology topology(n);
  for (NodeId i = 0; i < n; ++i) {
    topology.set_edge(i, (i + 1) % n, 1.0);
    topology.set_unbounded_edge(i, (i + 2) % n);
  }

  PathSet paths(n);
  DemandMatrix demands(n);
  PathSplit all_detour(n);
  const double demand = 1.0 / (n - 3);

  for (NodeId s = 0; s < n; ++s) {
    NodeId d = (s + 1) % n;
    Path direct{s, d};
    // Skip ahead two, walk the ring, skip back onto the destination.
    Path detour{s};
    for (int step = 2; step <= n - 1; ++step) detour.push_back((s + step) % n);
    detour.push_back(d);
    paths.set_paths(s, d, {direct, detour});
    demands.set(s, d, demand);
    all_detour.set_ratios(s, d, {0.0, 1.0});
  }

  return {std::move(topology), std::move(paths), std::move(demands),
          std::move(all_detour)};
}

DemandMatrix triangle_fixture_demands() {
  DemandMatrix demands(3);
  demands.set(0, 1, 2.0);
  demands.set(0, 2, 1.0);
  demands.set(1, 2, 1.0);
  return demands;
}

}  // namespace ssdo
