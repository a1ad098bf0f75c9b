#pragma once

#include "ssdo/config.hpp"
#include "ssdo/dense.hpp"

namespace ssdo {

/// Shortest-path initial configuration: every pair with candidates routes
/// 100% on its direct edge if present, otherwise on its first candidate
/// path. Throws NoPathError for a demanded pair with no candidates.
SplitTensor cold_start(const Topology& topology, const DemandMatrix& demands,
                       const PathSet& paths);

/// Demanded pairs whose candidate paths touch an edge of maximal
/// utilization, ordered by descending count of such edges touched, ties by
/// ascending (src, dst).
std::vector<SdPair> select_sds(const UtilizationState& state,
                               const DemandMatrix& demands,
                               const PathSet& paths);

struct DenseSolveResult {
  SplitTensor split;
  SolveReport report;
};

/// Sequential per-pair optimization on the intermediate-node form: selects
/// the pairs on the most utilized edges, re-solves each with the balanced
/// binary search, and repeats until an iteration no longer reduces the MLU
/// by more than epsilon0 (or the budget runs out). Pass `hot_start` to
/// refine an existing configuration instead of the shortest-path one.
DenseSolveResult run(const Topology& topology, const DemandMatrix& demands,
                     const PathSet& paths, const SolverConfig& config,
                     const SplitTensor* hot_start = nullptr);

struct DualStartResult {
  DenseSolveResult best;
  SolveReport cold_report;
  SolveReport hot_report;
  bool cold_selected = false;
};

/// Runs the cold-start and hot-start solves concurrently under the shared
/// budget and keeps the lower-MLU result (cold wins ties).
DualStartResult run_dual_start(const Topology& topology,
                               const DemandMatrix& demands,
                               const PathSet& paths, const SolverConfig& config,
                               const SplitTensor& hot_start);

}  // namespace ssdo
