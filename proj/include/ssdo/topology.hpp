#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <vector>

#include "ssdo/demand.hpp"
#include "ssdo/errors.hpp"

namespace ssdo {

struct Edge {
  NodeId src{};
  NodeId dst{};
  auto operator<=>(const Edge&) const = default;
};

/// Directed graph over dense node indices 0..|V|-1 with per-edge capacities.
///
/// A capacity is a finite nonnegative value, or unbounded (the edge never
/// saturates), or absent (no edge). Unbounded edges have utilization 0 by
/// definition. Instances are immutable once built and safe to share across
/// concurrent solver runs.
class Topology {
 public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  explicit Topology(int node_count)
      : n_(node_count),
        cap_(static_cast<std::size_t>(node_count) * node_count,
             std::numeric_limits<double>::quiet_NaN()) {
    if (node_count <= 0) throw InvariantViolation("topology needs at least one node");
  }

  int node_count() const { return n_; }

  bool has_edge(NodeId i, NodeId j) const { return !std::isnan(cap_[idx(i, j)]); }

  bool unbounded(NodeId i, NodeId j) const { return std::isinf(cap_[idx(i, j)]); }

  /// Capacity of edge (i,j); +inf if unbounded, NaN if absent.
  double capacity(NodeId i, NodeId j) const { return cap_[idx(i, j)]; }

  void set_edge(NodeId i, NodeId j, double capacity) {
    check_pair(i, j);
    if (!(capacity >= 0.0))
      throw InvariantViolation("edge capacity must be nonnegative");
    cap_[idx(i, j)] = capacity;
  }

  void set_unbounded_edge(NodeId i, NodeId j) {
    check_pair(i, j);
    cap_[idx(i, j)] = kUnbounded;
  }

  /// Adds to an existing finite capacity; parallel links sum.
  void add_edge_capacity(NodeId i, NodeId j, double capacity) {
    check_pair(i, j);
    if (!(capacity >= 0.0))
      throw InvariantViolation("edge capacity must be nonnegative");
    double& slot = cap_[idx(i, j)];
    if (std::isnan(slot))
      slot = capacity;
    else if (!std::isinf(slot))
      slot += capacity;
  }

  void remove_edge(NodeId i, NodeId j) {
    check_pair(i, j);
    cap_[idx(i, j)] = std::numeric_limits<double>::quiet_NaN();
  }

  /// All edges in ascending (src, dst) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = 0; j < n_; ++j)
        if (has_edge(i, j)) out.push_back({i, j});
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = 0; j < n_; ++j)
        if (has_edge(i, j)) ++c;
    return c;
  }

  std::size_t idx(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

 private:
  void check_pair(NodeId i, NodeId j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw InvariantViolation("node index out of range");
    if (i == j) throw InvariantViolation("self-loop edges are not allowed");
  }

  int n_;
  std::vector<double> cap_;
};

/// A path as its node sequence, source first, destination last.
using Path = std::vector<NodeId>;

/// Candidate paths per source-destination pair, in the order they were
/// computed (nondecreasing hop count for Yen output).
class PathSet {
 public:
  explicit PathSet(int node_count)
      : n_(node_count),
        paths_(static_cast<std::size_t>(node_count) * node_count) {
    if (node_count <= 0) throw InvariantViolation("path set needs at least one node");
  }

  int node_count() const { return n_; }

  const std::vector<Path>& paths(NodeId s, NodeId d) const {
    return paths_[idx(s, d)];
  }

  void set_paths(NodeId s, NodeId d, std::vector<Path> paths) {
    paths_[idx(s, d)] = std::move(paths);
  }

  void add_path(NodeId s, NodeId d, Path path) {
    paths_[idx(s, d)].push_back(std::move(path));
  }

  /// Intermediate-node view for one- and two-hop path sets: the direct path
  /// maps to the destination itself. Throws if any path has three or more
  /// hops.
  std::vector<NodeId> intermediates(NodeId s, NodeId d) const {
    std::vector<NodeId> mids;
    const auto& ps = paths_[idx(s, d)];
    mids.reserve(ps.size());
    for (const Path& p : ps) {
      if (p.size() == 2)
        mids.push_back(d);
      else if (p.size() == 3)
        mids.push_back(p[1]);
      else
        throw InvariantViolation(
            "intermediate-node view requires one- or two-hop paths");
    }
    return mids;
  }

  int max_hops() const {
    std::size_t longest = 0;
    for (const auto& ps : paths_)
      for (const Path& p : ps)
        if (p.size() > longest) longest = p.size();
    return longest == 0 ? 0 : static_cast<int>(longest) - 1;
  }

  bool two_hop_only() const { return max_hops() <= 2; }

  std::size_t idx(NodeId s, NodeId d) const {
    return static_cast<std::size_t>(s) * n_ + d;
  }

 private:
  int n_;
  std::vector<std::vector<Path>> paths_;
};

struct FailureScenario {
  std::vector<Edge> removed_edges;
};

/// Up to k loopless shortest paths from s to d by hop count, ties broken
/// lexicographically by node-index sequence. Throws NoPathError when d is
/// unreachable.
std::vector<Path> yen_k_shortest_paths(const Topology& topology, NodeId s,
                                       NodeId d, int k);

/// Yen for every ordered pair; unreachable pairs get an empty path list.
PathSet yen_paths_all_pairs(const Topology& topology, int k);

/// Directed complete graph on n nodes, every edge with the same capacity.
Topology complete_dcn_topology(int n, double uniform_capacity);

/// Copy of the topology with the scenario's edges removed. Throws
/// DisconnectsError if any demanded pair loses all routes; path sets must be
/// recomputed by the caller.
Topology apply_failures(const Topology& topology, const FailureScenario& scenario,
                        const DemandMatrix& demands);

/// Checks that every path references existing edges, starts at its source,
/// ends at its destination, is loopless, and appears at most once per pair.
void validate_path_set(const Topology& topology, const PathSet& paths);

}  // namespace ssdo
