#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ssdo/config.hpp"
#include "ssdo/demand.hpp"
#include "ssdo/topology.hpp"

namespace ssdo {

/// Split ratios for one- and two-hop routing: at(i,k,j) is the fraction of
/// demand (i,j) sent over i->k->j, with k == j meaning the direct edge.
/// Ratios over each pair's candidate set sum to 1.
class SplitTensor {
 public:
  explicit SplitTensor(int node_count)
      : n_(node_count),
        f_(static_cast<std::size_t>(node_count) * node_count * node_count, 0.0) {
    if (node_count <= 0) throw InvariantViolation("split tensor needs at least one node");
  }

  int node_count() const { return n_; }

  double at(NodeId i, NodeId k, NodeId j) const { return f_[idx(i, k, j)]; }

  void set(NodeId i, NodeId k, NodeId j, double value) {
    if (i == k || i == j)
      if (value != 0.0)
        throw InvariantViolation("split ratios with k==i or j==i must be zero");
    if (!(value >= 0.0)) throw InvariantViolation("split ratios must be nonnegative");
    f_[idx(i, k, j)] = value;
  }

  bool operator==(const SplitTensor& other) const = default;

 private:
  std::size_t idx(NodeId i, NodeId k, NodeId j) const {
    return (static_cast<std::size_t>(i) * n_ + k) * n_ + j;
  }

  int n_;
  std::vector<double> f_;
};

/// Per-edge traffic and utilization, maintained incrementally alongside a
/// split configuration. Utilization of unbounded, absent and zero-capacity
/// edges is 0.
struct UtilizationState {
  explicit UtilizationState(int node_count)
      : n(node_count),
        load(static_cast<std::size_t>(node_count) * node_count, 0.0),
        util(static_cast<std::size_t>(node_count) * node_count, 0.0) {}

  double load_at(NodeId i, NodeId j) const { return load[idx(i, j)]; }
  double util_at(NodeId i, NodeId j) const { return util[idx(i, j)]; }

  std::size_t idx(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * n + j;
  }

  int n;
  std::vector<double> load;
  std::vector<double> util;
};

/// From-scratch load/utilization for a split configuration. Throws
/// CapacityZeroWithLoadError when a zero-capacity edge would carry traffic.
UtilizationState compute_utilization(const Topology& topology,
                                     const DemandMatrix& demands,
                                     const SplitTensor& split);

/// Maximum link utilization over bounded edges.
double max_utilization(const UtilizationState& state);

/// One pair's subproblem: candidate intermediates, residual data for the
/// bounded edges of each candidate path, and the search bounds.
struct SubproblemView {
  struct Leg {
    Edge edge;
    double cap;
    double background;  // traffic on the edge excluding this pair's own
  };

  NodeId src = 0;
  NodeId dst = 0;
  double demand = 0.0;
  std::vector<NodeId> mids;      // candidate intermediates, path order
  std::vector<Leg> legs;         // bounded legs, grouped per mid
  std::vector<int> leg_offset;   // mids.size()+1 offsets into legs
  double u_lb = 0.0;             // background-only lower bound
  double u_ub = 0.0;             // MLU of the unmodified configuration
};

enum class LowerBoundMode {
  exact,                // scan every edge for the background maximum
  relevant_edges_only,  // cheap bound over this pair's candidate edges
};

/// Builds the subproblem view for (s,d): background traffic per candidate
/// edge (current load minus the pair's own contribution), plus search
/// bounds. Runs in O(|K_sd|) with relevant_edges_only; the exact mode scans
/// all edges. `known_mlu`, when given, is used as u_ub instead of a scan
/// (any value >= the current MLU is valid).
SubproblemView background_traffic(const Topology& topology,
                                  const UtilizationState& state,
                                  const SplitTensor& split,
                                  const DemandMatrix& demands,
                                  const PathSet& paths, SdPair sd,
                                  LowerBoundMode lb_mode = LowerBoundMode::exact,
                                  std::optional<double> known_mlu = std::nullopt);

/// Per-candidate split-ratio upper bounds at MLU level u0: the residual
/// capacity of each path divided by the demand. Unbounded edges never
/// constrain; a path with no bounded edge gets +inf. Throws ZeroDemandError.
std::vector<double> residual_ratios(const SubproblemView& view, double u0);

/// Feasibility judgment for the ratio bounds: feasible iff they sum to at
/// least 1 with no negative component; returns the normalized ratios on
/// success.
std::optional<std::vector<double>> feasibility_check(std::span<const double> fbar);

/// Componentwise max{0, fbar}.
std::vector<double> balanced_ratios(std::span<const double> fbar);

/// (u_lb, u_ub) from the view.
std::pair<double, double> search_bounds(const SubproblemView& view);

/// Balanced binary search for the subproblem: searches u over [0, u_ub]
/// with predicate sum(max(0, fbar(u))) >= 1 until the bracket is narrower
/// than epsilon, then returns the clamped ratios at the feasible end,
/// normalized to sum 1. The greedy_vertex style instead searches with the
/// plain feasibility predicate (nonnegative bounds summing to 1) and fills
/// candidates in order. Throws NeverFeasibleError if even u_ub fails the
/// predicate.
std::vector<double> bbsm(const SubproblemView& view, double epsilon,
                         SubproblemStyle style = SubproblemStyle::balanced);

/// Writes new ratios for one pair into the tensor and updates load/util
/// incrementally, touching only the pair's candidate edges. `new_ratios`
/// follows the order of paths.intermediates(s,d) and must be nonnegative
/// and sum to 1.
void apply_sd_update(const Topology& topology, UtilizationState& state,
                     SplitTensor& split, const DemandMatrix& demands,
                     const PathSet& paths, SdPair sd,
                     std::span<const double> new_ratios);

/// Full invariant check: nonnegativity, zero forbidden entries, zero outside
/// the path set, and per-pair normalization for pairs with candidates.
void validate_split_tensor(const Topology& topology, const PathSet& paths,
                           const SplitTensor& split);

}  // namespace ssdo
