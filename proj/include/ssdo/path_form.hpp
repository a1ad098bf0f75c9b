#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ssdo/config.hpp"
#include "ssdo/dense.hpp"
#include "ssdo/demand.hpp"
#include "ssdo/topology.hpp"

namespace ssdo {

/// Per-pair split ratios over candidate paths of any hop count, aligned
/// with the PathSet order.
class PathSplit {
 public:
  explicit PathSplit(int node_count)
      : n_(node_count),
        ratios_(static_cast<std::size_t>(node_count) * node_count) {
    if (node_count <= 0) throw InvariantViolation("path split needs at least one node");
  }

  int node_count() const { return n_; }

  const std::vector<double>& ratios(NodeId s, NodeId d) const {
    return ratios_[idx(s, d)];
  }

  void set_ratios(NodeId s, NodeId d, std::vector<double> ratios) {
    ratios_[idx(s, d)] = std::move(ratios);
  }

  std::size_t idx(NodeId s, NodeId d) const {
    return static_cast<std::size_t>(s) * n_ + d;
  }

  bool operator==(const PathSplit& other) const = default;

 private:
  int n_;
  std::vector<std::vector<double>> ratios_;
};

/// Per-edge load and utilization for the path form; same layout and
/// conventions as the intermediate-node form.
using EdgeLoadState = UtilizationState;

/// From-scratch per-edge utilization of a path-form configuration.
EdgeLoadState path_utilization(const Topology& topology,
                               const DemandMatrix& demands,
                               const PathSet& paths, const PathSplit& split);

/// Per-path split-ratio upper bounds at utilization level u: for each
/// candidate path, the minimum over its bounded edges of
/// (u - residual_baseline) * capacity / demand, where the residual baseline
/// is the edge utilization with this pair's own traffic removed. A path
/// with no bounded edge gets +inf. Throws ZeroDemandError.
std::vector<double> path_ratio_bounds(const Topology& topology,
                                      const EdgeLoadState& state,
                                      const PathSplit& split,
                                      const DemandMatrix& demands,
                                      const PathSet& paths, SdPair sd, double u);

/// Path-based balanced binary search for one pair: residual baseline per
/// candidate edge (the pair's own contribution removed), binary search on u
/// over [0, max util], clamped per-path ratio bounds, normalized result.
/// The state is left untouched. `search_top`, when given, replaces the
/// max-utilization scan as the bracket top (any value >= the current MLU is
/// valid). Throws ZeroDemandError.
std::vector<double> pb_bbsm(const Topology& topology, const EdgeLoadState& state,
                            const PathSplit& split, const DemandMatrix& demands,
                            const PathSet& paths, SdPair sd, double epsilon,
                            std::optional<double> search_top = std::nullopt);

/// Writes new ratios for one pair and updates load/util incrementally over
/// the pair's candidate edges.
void apply_path_update(const Topology& topology, EdgeLoadState& state,
                       PathSplit& split, const DemandMatrix& demands,
                       const PathSet& paths, SdPair sd,
                       std::span<const double> new_ratios);

/// Shortest-candidate initial configuration in path form.
PathSplit path_cold_start(const Topology& topology, const DemandMatrix& demands,
                          const PathSet& paths);

/// Same selection rule as the intermediate-node form, over full paths.
std::vector<SdPair> select_sds_path(const EdgeLoadState& state,
                                    const DemandMatrix& demands,
                                    const PathSet& paths);

struct PathSolveResult {
  PathSplit split;
  SolveReport report;
};

/// Sequential per-pair optimization in path form, starting from `initial`.
PathSolveResult path_ssdo(const Topology& topology, const DemandMatrix& demands,
                          const PathSet& paths, const PathSplit& initial,
                          const SolverConfig& config);

struct PathDualStartResult {
  PathSolveResult best;
  SolveReport cold_report;
  SolveReport hot_report;
  bool cold_selected = false;
};

/// Cold and hot path-form solves under the shared budget; keeps the
/// lower-MLU result (cold wins ties).
PathDualStartResult path_ssdo_dual_start(const Topology& topology,
                                         const DemandMatrix& demands,
                                         const PathSet& paths,
                                         const SolverConfig& config,
                                         const PathSplit& hot_start);

/// Conversions between the two forms; the path set must be one/two-hop only
/// for the tensor direction.
SplitTensor tensor_from_path_split(const PathSet& paths, const PathSplit& split);
PathSplit path_split_from_tensor(const PathSet& paths, const SplitTensor& split);

/// Nonnegativity plus per-demanded-pair normalization.
void validate_path_split(const DemandMatrix& demands, const PathSet& paths,
                         const PathSplit& split);

}  // namespace ssdo
