#include "ssdo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace ssdo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int grid_resolution(double step) {
  if (!(step > 0.0)) throw InvariantViolation("grid step must be positive");
  return std::max(1, static_cast<int>(std::lround(1.0 / step)));
}

// Background load on edge (i,j) with pair (s,d) excluded, summed by direct
// triple loop over the tensor (kept independent of the incremental path).
double background_load(const SplitTensor& split, const DemandMatrix& demands,
                       int n, NodeId i, NodeId j, NodeId s, NodeId d) {
  double load = 0.0;
  for (NodeId k = 0; k < n; ++k) {
    if (!(i == s && k == d)) load += split.at(i, j, k) * demands.at(i, k);
    if (!(k == s && j == d)) load += split.at(k, i, j) * demands.at(k, j);
  }
  return load;
}

}  // namespace

SubproblemOracleResult grid_subproblem_optimum(const Topology& topology,
                                               const DemandMatrix& demands,
                                               const SplitTensor& split,
                                               const PathSet& paths, SdPair sd,
                                               double step) {
  const NodeId s = sd.first;
  const NodeId d = sd.second;
  const int n = topology.node_count();
  const std::vector<NodeId> mids = paths.intermediates(s, d);
  if (mids.size() > 4)
    throw TooLargeError("subproblem oracle capped at 4 candidates");
  if (step > 1e-2 + 1e-15)
    throw InvariantViolation("subproblem oracle needs step <= 1e-2");
  if (mids.empty()) throw InvariantViolation("pair has no candidates");
  const double demand = demands.at(s, d);
  if (!(demand > 0.0)) throw ZeroDemandError(s, d);

  // Background utilization with (s,d) removed, plus the pair's own edges.
  struct TouchedEdge {
    double cap;       // +inf when unbounded
    double bg;        // load excluding (s,d)
  };
  std::vector<std::vector<TouchedEdge>> legs(mids.size());
  std::unordered_set<std::size_t> touched;
  auto edge_index = [n](NodeId a, NodeId b) {
    return static_cast<std::size_t>(a) * n + b;
  };
  for (std::size_t m = 0; m < mids.size(); ++m) {
    NodeId k = mids[m];
    auto push = [&](NodeId a, NodeId b) {
      touched.insert(edge_index(a, b));
      legs[m].push_back({topology.capacity(a, b),
                         background_load(split, demands, n, a, b, s, d)});
    };
    if (k == d) {
      push(s, d);
    } else {
      push(s, k);
      push(k, d);
    }
  }

  double base_max = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || !topology.has_edge(i, j) || topology.unbounded(i, j))
        continue;
      if (touched.count(edge_index(i, j))) continue;
      double c = topology.capacity(i, j);
      if (c > 0.0)
        base_max = std::max(base_max,
                            background_load(split, demands, n, i, j, s, d) / c);
    }

  const int res = grid_resolution(step);
  const int dims = static_cast<int>(mids.size());

  SubproblemOracleResult result;
  result.grid_step = 1.0 / res;
  result.optimal_mlu = kInf;

  std::vector<int> counts(dims, 0);
  auto evaluate = [&]() {
    double mlu = base_max;
    for (int m = 0; m < dims; ++m) {
      double flow = demand * counts[m] / res;
      for (const TouchedEdge& e : legs[m]) {
        if (std::isinf(e.cap)) continue;
        if (e.cap == 0.0) {
          if (e.bg + flow > 1e-12) mlu = kInf;
          continue;
        }
        mlu = std::max(mlu, (e.bg + flow) / e.cap);
      }
    }
    if (mlu < result.optimal_mlu) {
      result.optimal_mlu = mlu;
      result.argmin.resize(dims);
      for (int m = 0; m < dims; ++m)
        result.argmin[m] = static_cast<double>(counts[m]) / res;
    }
  };

  // Lexicographic simplex enumeration keeps the reported argmin the first
  // minimizer in grid order.
  auto enumerate = [&](auto&& self, int dim, int remaining) -> void {
    if (dim == dims - 1) {
      counts[dim] = remaining;
      evaluate();
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[dim] = c;
      self(self, dim + 1, remaining - c);
    }
  };
  enumerate(enumerate, 0, res);
  return result;
}

OracleResult grid_global_optimum(const Topology& topology,
                                 const DemandMatrix& demands,
                                 const PathSet& paths, double step) {
  const int n = topology.node_count();
  const int res = grid_resolution(step);

  std::vector<SdPair> free_pairs;
  std::vector<double> base_load(static_cast<std::size_t>(n) * n, 0.0);
  int dims = 0;
  for (auto sd : demands.demanded_pairs()) {
    const auto& ps = paths.paths(sd.first, sd.second);
    if (ps.empty()) throw NoPathError(sd.first, sd.second);
    if (ps.size() == 1) {
      for (std::size_t i = 0; i + 1 < ps[0].size(); ++i)
        base_load[static_cast<std::size_t>(ps[0][i]) * n + ps[0][i + 1]] +=
            demands.at(sd.first, sd.second);
    } else {
      free_pairs.push_back(sd);
      dims += static_cast<int>(ps.size()) - 1;
    }
  }
  if (dims > 6)
    throw TooLargeError("global oracle capped at 6 free ratio dimensions");

  auto mlu_of = [&](const std::vector<double>& load) {
    double mlu = 0.0;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) {
        if (i == j || !topology.has_edge(i, j) || topology.unbounded(i, j))
          continue;
        double l = load[static_cast<std::size_t>(i) * n + j];
        double c = topology.capacity(i, j);
        if (c == 0.0) {
          if (l > 1e-12) return kInf;
          continue;
        }
        mlu = std::max(mlu, l / c);
      }
    return mlu;
  };

  OracleResult result{kInf, PathSplit(n), 1.0 / res};
  std::vector<std::vector<int>> counts(free_pairs.size());
  for (std::size_t p = 0; p < free_pairs.size(); ++p)
    counts[p].resize(paths.paths(free_pairs[p].first, free_pairs[p].second).size());

  auto record = [&]() {
    PathSplit argmin(n);
    for (auto sd : demands.demanded_pairs()) {
      const auto& ps = paths.paths(sd.first, sd.second);
      if (ps.size() == 1) argmin.set_ratios(sd.first, sd.second, {1.0});
    }
    for (std::size_t p = 0; p < free_pairs.size(); ++p) {
      std::vector<double> ratios(counts[p].size());
      for (std::size_t q = 0; q < counts[p].size(); ++q)
        ratios[q] = static_cast<double>(counts[p][q]) / res;
      argmin.set_ratios(free_pairs[p].first, free_pairs[p].second,
                        std::move(ratios));
    }
    result.argmin = std::move(argmin);
  };

  // Depth-first product of per-pair simplex grids; each level works on its
  // own copy of the load vector so the arithmetic at every leaf is exact.
  auto enumerate_pair = [&](auto&& self, std::size_t pair_idx,
                            const std::vector<double>& load) -> void {
    if (pair_idx == free_pairs.size()) {
      double mlu = mlu_of(load);
      if (mlu < result.optimal_mlu) {
        result.optimal_mlu = mlu;
        record();
      }
      return;
    }
    auto [s, d] = free_pairs[pair_idx];
    const auto& ps = paths.paths(s, d);
    const double demand = demands.at(s, d);
    auto& cnt = counts[pair_idx];

    auto assign = [&](auto&& inner, std::size_t path_idx, int remaining) -> void {
      if (path_idx == ps.size() - 1) {
        cnt[path_idx] = remaining;
        std::vector<double> next = load;
        for (std::size_t p = 0; p < ps.size(); ++p) {
          double flow = demand * cnt[p] / res;
          if (flow == 0.0) continue;
          for (std::size_t i = 0; i + 1 < ps[p].size(); ++i)
            next[static_cast<std::size_t>(ps[p][i]) * n + ps[p][i + 1]] += flow;
        }
        self(self, pair_idx + 1, next);
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        cnt[path_idx] = c;
        inner(inner, path_idx + 1, remaining - c);
      }
    };
    assign(assign, 0, res);
  };
  enumerate_pair(enumerate_pair, 0, base_load);
  return result;
}

}  // namespace ssdo
