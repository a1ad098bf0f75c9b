#pragma once

// Test-only brute-force oracles and instance generators. These recompute
// everything by the raw formulas, independent of the incremental machinery
// they are used to check.

#include <algorithm>
#include <random>
#include <vector>

#include "ssdo/dense.hpp"
#include "ssdo/demand.hpp"
#include "ssdo/path_form.hpp"
#include "ssdo/topology.hpp"

namespace testsupport {

// Every loopless s->d path, ordered by hop count then lexicographic node
// sequence.
inline std::vector<ssdo::Path> brute_force_paths(const ssdo::Topology& g,
                                                 ssdo::NodeId s, ssdo::NodeId d) {
  std::vector<ssdo::Path> all;
  std::vector<char> visited(g.node_count(), 0);
  ssdo::Path current{s};
  visited[s] = 1;
  auto dfs = [&](auto&& self, ssdo::NodeId u) -> void {
    if (u == d) {
      all.push_back(current);
      return;
    }
    for (ssdo::NodeId v = 0; v < g.node_count(); ++v) {
      if (visited[v] || v == u || !g.has_edge(u, v)) continue;
      visited[v] = 1;
      current.push_back(v);
      self(self, v);
      current.pop_back();
      visited[v] = 0;
    }
  };
  dfs(dfs, s);
  std::sort(all.begin(), all.end(), [](const ssdo::Path& a, const ssdo::Path& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return all;
}

// Per-edge load summed directly over the tensor: for edge (i,j), the first
// hop of every i->j->k flow plus the second hop of every k->i->j flow.
inline std::vector<double> load_by_formula(const ssdo::DemandMatrix& demands,
                                           const ssdo::SplitTensor& split) {
  const int n = demands.node_count();
  std::vector<double> load(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        sum += split.at(i, j, k) * demands.at(i, k);
        sum += split.at(k, i, j) * demands.at(k, j);
      }
      load[static_cast<std::size_t>(i) * n + j] = sum;
    }
  return load;
}

// Literal background-traffic case analysis for pair (s,d): the pair's own
// terms are dropped from the two sums.
inline std::vector<double> background_by_formula(const ssdo::DemandMatrix& demands,
                                                 const ssdo::SplitTensor& split,
                                                 ssdo::SdPair sd) {
  const int n = demands.node_count();
  const auto [s, d] = sd;
  std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        if (!(i == s && k == d)) sum += split.at(i, j, k) * demands.at(i, k);
        if (!(k == s && j == d)) sum += split.at(k, i, j) * demands.at(k, j);
      }
      q[static_cast<std::size_t>(i) * n + j] = sum;
    }
  return q;
}

inline double ulb_by_formula(const ssdo::Topology& g,
                             const ssdo::DemandMatrix& demands,
                             const ssdo::SplitTensor& split, ssdo::SdPair sd) {
  const int n = g.node_count();
  std::vector<double> q = background_by_formula(demands, split, sd);
  double lb = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !g.has_edge(i, j) || g.unbounded(i, j)) continue;
      double c = g.capacity(i, j);
      if (c > 0.0)
        lb = std::max(lb, q[static_cast<std::size_t>(i) * n + j] / c);
    }
  return lb;
}

inline double uub_by_formula(const ssdo::Topology& g,
                             const ssdo::DemandMatrix& demands,
                             const ssdo::SplitTensor& split) {
  const int n = g.node_count();
  std::vector<double> load = load_by_formula(demands, split);
  double ub = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !g.has_edge(i, j) || g.unbounded(i, j)) continue;
      double c = g.capacity(i, j);
      if (c > 0.0)
        ub = std::max(ub, load[static_cast<std::size_t>(i) * n + j] / c);
    }
  return ub;
}

struct RandomInstance {
  ssdo::Topology topology;
  ssdo::PathSet paths;
  ssdo::DemandMatrix demands;
};

// Complete topology with random capacities, Yen path sets, and sparse
// random demands (at least one demanded pair).
inline RandomInstance random_instance(std::mt19937_64& rng, int n, int k,
                                      double demand_density = 0.4,
                                      double cap_lo = 0.5, double cap_hi = 4.0) {
  std::uniform_real_distribution<double> cap(cap_lo, cap_hi);
  std::uniform_real_distribution<double> dem(0.1, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  ssdo::Topology g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.set_edge(i, j, cap(rng));

  ssdo::PathSet paths = ssdo::yen_paths_all_pairs(g, k);

  ssdo::DemandMatrix demands(n);
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (coin(rng) < demand_density) {
        demands.set(i, j, dem(rng));
        any = true;
      }
    }
  if (!any) demands.set(0, 1, dem(rng));
  return {std::move(g), std::move(paths), std::move(demands)};
}

// Valid random tensor: positive ratios over every pair's candidate set,
// normalized to 1.
inline ssdo::SplitTensor random_tensor(std::mt19937_64& rng,
                                       const ssdo::PathSet& paths) {
  const int n = paths.node_count();
  std::exponential_distribution<double> expo(1.0);
  ssdo::SplitTensor split(n);
  for (int s = 0; s < n; ++s)
    for (int d = 0; d < n; ++d) {
      if (s == d) continue;
      std::vector<ssdo::NodeId> mids = paths.intermediates(s, d);
      if (mids.empty()) continue;
      std::vector<double> w(mids.size());
      double sum = 0.0;
      for (double& x : w) {
        x = expo(rng) + 1e-3;
        sum += x;
      }
      for (std::size_t m = 0; m < mids.size(); ++m)
        split.set(s, mids[m], d, w[m] / sum);
    }
  return split;
}

inline ssdo::SdPair random_demanded_pair(std::mt19937_64& rng,
                                         const ssdo::DemandMatrix& demands) {
  std::vector<ssdo::SdPair> pairs = demands.demanded_pairs();
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  return pairs[pick(rng)];
}

}  // namespace testsupport
