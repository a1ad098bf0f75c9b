#pragma once

#include "ssdo/demand.hpp"
#include "ssdo/path_form.hpp"
#include "ssdo/topology.hpp"

namespace ssdo {

/// Directed ring with unit-capacity clockwise edges and unbounded skip
/// edges. Every adjacent clockwise pair carries demand 1/(n-3) and has two
/// candidate paths: the direct edge and the (n-3)-ring-edge detour. The
/// bundled split routes everything over the detours, which pins every ring
/// edge at utilization 1 and no single-pair adjustment can improve it.
struct RingFixture {
  Topology topology;
  PathSet paths;
  DemandMatrix demands;
  PathSplit all_detour_split;
};

RingFixture ring_deadlock_fixture(int n);

/// 3-node demand fixture used across tests and the CLI: D(0,1)=2,
/// D(0,2)=1, D(1,2)=1.
DemandMatrix triangle_fixture_demands();

}  // namespace ssdo
