#include "ssdo/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <unordered_set>

namespace ssdo {

namespace {

struct Adjacency {
  std::vector<std::vector<NodeId>> out;  // ascending neighbor order
  std::vector<std::vector<NodeId>> in;
};

Adjacency build_adjacency(const Topology& g) {
  const int n = g.node_count();
  Adjacency adj;
  adj.out.resize(n);
  adj.in.resize(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && g.has_edge(i, j)) {
        adj.out[i].push_back(j);
        adj.in[j].push_back(i);
      }
  return adj;
}

std::int64_t edge_key(int n, NodeId u, NodeId v) {
  return static_cast<std::int64_t>(u) * n + v;
}

// Shortest s->d path by hop count in the masked graph; among equal-hop
// paths, the lexicographically smallest node sequence. Returns empty when
// unreachable. Distances are computed backward from d so the forward walk
// can pick the smallest feasible neighbor at each step.
Path lex_min_shortest(const Adjacency& adj, int n, NodeId s, NodeId d,
                      const std::vector<char>& node_banned,
                      const std::unordered_set<std::int64_t>& edge_banned) {
  constexpr int kUnreached = -1;
  std::vector<int> dist(n, kUnreached);
  dist[d] = 0;
  std::deque<NodeId> queue{d};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == s) break;  // all shorter layers already settled
    for (NodeId u : adj.in[v]) {
      if (node_banned[u] || dist[u] != kUnreached) continue;
      if (!edge_banned.empty() && edge_banned.count(edge_key(n, u, v))) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  if (dist[s] == kUnreached) return {};

  Path path{s};
  NodeId cur = s;
  int remaining = dist[s];
  while (cur != d) {
    NodeId next = -1;
    for (NodeId w : adj.out[cur]) {
      if (node_banned[w] || dist[w] != remaining - 1) continue;
      if (!edge_banned.empty() && edge_banned.count(edge_key(n, cur, w))) continue;
      next = w;
      break;
    }
    // remaining > 0 guarantees a neighbor on some shortest path
    path.push_back(next);
    cur = next;
    --remaining;
  }
  return path;
}

std::vector<Path> yen_impl(const Adjacency& adj, int n, NodeId s, NodeId d, int k) {
  std::vector<char> no_nodes(n, 0);
  std::unordered_set<std::int64_t> no_edges;

  Path first = lex_min_shortest(adj, n, s, d, no_nodes, no_edges);
  if (first.empty()) throw NoPathError(s, d);

  std::vector<Path> accepted{first};
  // Candidates ordered by (hop count, node sequence); the set also dedupes
  // spur paths rediscovered from different deviation points.
  std::set<std::pair<int, Path>> candidates;

  while (static_cast<int>(accepted.size()) < k) {
    const Path& prev = accepted.back();
    for (std::size_t spur_idx = 0; spur_idx + 1 < prev.size(); ++spur_idx) {
      NodeId spur = prev[spur_idx];

      std::vector<char> node_banned(n, 0);
      for (std::size_t i = 0; i < spur_idx; ++i) node_banned[prev[i]] = 1;

      std::unordered_set<std::int64_t> edge_banned;
      for (const Path& p : accepted) {
        if (p.size() > spur_idx &&
            std::equal(p.begin(), p.begin() + spur_idx + 1, prev.begin()))
          edge_banned.insert(edge_key(n, p[spur_idx], p[spur_idx + 1]));
      }

      Path spur_path = lex_min_shortest(adj, n, spur, d, node_banned, edge_banned);
      if (spur_path.empty()) continue;

      Path total(prev.begin(), prev.begin() + spur_idx);
      total.insert(total.end(), spur_path.begin(), spur_path.end());
      candidates.emplace(static_cast<int>(total.size()) - 1, std::move(total));
    }
    if (candidates.empty()) break;
    auto best = candidates.begin();
    accepted.push_back(best->second);
    candidates.erase(best);
  }
  return accepted;
}

}  // namespace

std::vector<Path> yen_k_shortest_paths(const Topology& topology, NodeId s,
                                       NodeId d, int k) {
  if (s == d) throw InvariantViolation("source and destination must differ");
  if (k <= 0) throw InvariantViolation("k must be positive");
  Adjacency adj = build_adjacency(topology);
  return yen_impl(adj, topology.node_count(), s, d, k);
}

PathSet yen_paths_all_pairs(const Topology& topology, int k) {
  if (k <= 0) throw InvariantViolation("k must be positive");
  const int n = topology.node_count();
  Adjacency adj = build_adjacency(topology);
  PathSet out(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      try {
        out.set_paths(s, d, yen_impl(adj, n, s, d, k));
      } catch (const NoPathError&) {
        // unreachable pair: leave the entry empty
      }
    }
  return out;
}

Topology complete_dcn_topology(int n, double uniform_capacity) {
  if (n < 2) throw InvariantViolation("complete topology needs at least 2 nodes");
  if (!(uniform_capacity > 0.0))
    throw InvariantViolation("uniform capacity must be positive");
  Topology g(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j) g.set_edge(i, j, uniform_capacity);
  return g;
}

Topology apply_failures(const Topology& topology, const FailureScenario& scenario,
                        const DemandMatrix& demands) {
  Topology out = topology;
  for (const Edge& e : scenario.removed_edges) {
    if (!out.has_edge(e.src, e.dst))
      throw InvariantViolation("failure scenario removes a nonexistent edge");
    out.remove_edge(e.src, e.dst);
  }

  Adjacency adj = build_adjacency(out);
  const int n = out.node_count();
  std::vector<char> no_nodes(n, 0);
  std::unordered_set<std::int64_t> no_edges;
  for (auto [s, d] : demands.demanded_pairs()) {
    if (lex_min_shortest(adj, n, s, d, no_nodes, no_edges).empty())
      throw DisconnectsError(s, d);
  }
  return out;
}

void validate_path_set(const Topology& topology, const PathSet& paths) {
  const int n = topology.node_count();
  if (paths.node_count() != n)
    throw InvariantViolation("path set and topology disagree on node count");
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) {
        if (!paths.paths(s, d).empty())
          throw InvariantViolation("path set contains a self pair");
        continue;
      }
      const auto& ps = paths.paths(s, d);
      for (const Path& p : ps) {
        if (p.size() < 2 || p.front() != s || p.back() != d)
          throw InvariantViolation("path endpoints do not match its pair");
        std::unordered_set<NodeId> seen;
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (p[i] < 0 || p[i] >= n)
            throw InvariantViolation("path references an unknown node");
          if (!seen.insert(p[i]).second)
            throw InvariantViolation("path revisits a node");
          if (i + 1 < p.size() && !topology.has_edge(p[i], p[i + 1]))
            throw InvariantViolation("path references a missing edge");
        }
      }
      for (std::size_t a = 0; a < ps.size(); ++a)
        for (std::size_t b = a + 1; b < ps.size(); ++b)
          if (ps[a] == ps[b])
            throw InvariantViolation("duplicate path within a pair");
    }
}

}  // namespace ssdo
