#include "ssdo/path_form.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace ssdo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilitySlack = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double edge_util(const Topology& g, NodeId i, NodeId j, double load) {
  double c = g.capacity(i, j);
  if (std::isnan(c) || std::isinf(c) || c == 0.0) return 0.0;
  return load / c;
}

void add_load(const Topology& g, EdgeLoadState& state, NodeId i, NodeId j,
              double delta) {
  double& l = state.load[state.idx(i, j)];
  l += delta;
  if (l < 0.0) l = 0.0;
  state.util[state.idx(i, j)] = edge_util(g, i, j, l);
}

// Residual-baseline data for one pair: unique bounded candidate edges with
// the pair's own traffic removed, and per-path leg indices. Baselines are
// kept in load units so the bound arithmetic matches the intermediate-node
// form bit for bit on shared instances.
struct CandidateEdges {
  struct Entry {
    double cap;
    double baseline;  // load excluding the pair's own traffic
  };
  std::vector<Entry> entries;
  std::vector<std::vector<int>> path_legs;  // bounded legs per path
};

CandidateEdges collect_candidates(const Topology& topology,
                                  const EdgeLoadState& state,
                                  const PathSplit& split,
                                  const DemandMatrix& demands,
                                  const PathSet& paths, SdPair sd) {
  const auto [s, d] = sd;
  const auto& ps = paths.paths(s, d);
  const auto& ratios = split.ratios(s, d);
  const double demand = demands.at(s, d);

  CandidateEdges out;
  out.path_legs.resize(ps.size());
  std::unordered_map<std::size_t, int> index_of;
  std::vector<double> own;

  for (std::size_t p = 0; p < ps.size(); ++p) {
    double own_load = demand * (p < ratios.size() ? ratios[p] : 0.0);
    for (std::size_t i = 0; i + 1 < ps[p].size(); ++i) {
      NodeId a = ps[p][i], b = ps[p][i + 1];
      if (topology.unbounded(a, b)) continue;
      std::size_t key = state.idx(a, b);
      auto [it, inserted] = index_of.emplace(key, static_cast<int>(out.entries.size()));
      if (inserted) {
        out.entries.push_back({topology.capacity(a, b), state.load[key]});
        own.push_back(0.0);
      }
      own[it->second] += own_load;
      out.path_legs[p].push_back(it->second);
    }
  }
  for (std::size_t e = 0; e < out.entries.size(); ++e) {
    auto& entry = out.entries[e];
    double q = entry.baseline - own[e];
    if (q < 0.0) {
      if (q < -1e-6)
        throw InvariantViolation("utilization state inconsistent with split");
      q = 0.0;
    }
    entry.baseline = q;
  }
  return out;
}

std::vector<double> ratio_bounds(const CandidateEdges& cand, double demand,
                                 double u) {
  std::vector<double> fbar(cand.path_legs.size(), 0.0);
  for (std::size_t p = 0; p < cand.path_legs.size(); ++p) {
    double bound = kInf;
    for (int e : cand.path_legs[p]) {
      const auto& entry = cand.entries[e];
      bound = std::min(bound, u * entry.cap - entry.baseline);
    }
    fbar[p] = std::isinf(bound) ? bound : bound / demand;
  }
  return fbar;
}

double clamped_sum(const std::vector<double>& fbar) {
  double sum = 0.0;
  for (double v : fbar) {
    if (std::isinf(v)) return kInf;
    if (v > 0.0) sum += v;
  }
  return sum;
}

std::vector<double> normalize_ratios(const std::vector<double>& fbb) {
  std::vector<double> out(fbb.size(), 0.0);
  int inf_count = 0;
  for (double v : fbb)
    if (std::isinf(v)) ++inf_count;
  if (inf_count > 0) {
    for (std::size_t i = 0; i < fbb.size(); ++i)
      if (std::isinf(fbb[i])) out[i] = 1.0 / inf_count;
    return out;
  }
  double sum = 0.0;
  for (double v : fbb) sum += v;
  if (sum <= 0.0)
    throw NeverFeasibleError("ratio bounds sum to zero at a feasible level");
  for (std::size_t i = 0; i < fbb.size(); ++i) out[i] = fbb[i] / sum;
  return out;
}

}  // namespace

EdgeLoadState path_utilization(const Topology& topology,
                               const DemandMatrix& demands,
                               const PathSet& paths, const PathSplit& split) {
  const int n = topology.node_count();
  if (demands.node_count() != n || paths.node_count() != n ||
      split.node_count() != n)
    throw InvariantViolation("dimension mismatch");

  EdgeLoadState state(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      double demand = demands.at(s, d);
      if (demand <= 0.0) continue;
      const auto& ps = paths.paths(s, d);
      const auto& ratios = split.ratios(s, d);
      if (ratios.size() != ps.size())
        throw InvariantViolation("demanded pair lacks split ratios");
      for (std::size_t p = 0; p < ps.size(); ++p) {
        double f = ratios[p];
        if (f <= 0.0) continue;
        for (std::size_t i = 0; i + 1 < ps[p].size(); ++i)
          state.load[state.idx(ps[p][i], ps[p][i + 1])] += f * demand;
      }
    }

  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      double l = state.load[state.idx(i, j)];
      if (l <= 0.0) continue;
      if (!topology.unbounded(i, j) && topology.capacity(i, j) == 0.0 && l > 1e-12)
        throw CapacityZeroWithLoadError(i, j);
      state.util[state.idx(i, j)] = edge_util(topology, i, j, l);
    }
  return state;
}

std::vector<double> path_ratio_bounds(const Topology& topology,
                                      const EdgeLoadState& state,
                                      const PathSplit& split,
                                      const DemandMatrix& demands,
                                      const PathSet& paths, SdPair sd, double u) {
  const double demand = demands.at(sd.first, sd.second);
  if (!(demand > 0.0)) throw ZeroDemandError(sd.first, sd.second);
  CandidateEdges cand =
      collect_candidates(topology, state, split, demands, paths, sd);
  return ratio_bounds(cand, demand, u);
}

std::vector<double> pb_bbsm(const Topology& topology, const EdgeLoadState& state,
                            const PathSplit& split, const DemandMatrix& demands,
                            const PathSet& paths, SdPair sd, double epsilon,
                            std::optional<double> search_top) {
  if (!(epsilon > 0.0)) throw InvariantViolation("epsilon must be positive");
  const double demand = demands.at(sd.first, sd.second);
  if (!(demand > 0.0)) throw ZeroDemandError(sd.first, sd.second);

  CandidateEdges cand =
      collect_candidates(topology, state, split, demands, paths, sd);

  auto feasible_at = [&](double u) {
    return clamped_sum(ratio_bounds(cand, demand, u)) >= 1.0 - kFeasibilitySlack;
  };

  double hi = search_top ? *search_top : max_utilization(state);
  if (!feasible_at(hi))
    throw NeverFeasibleError("search upper bound is infeasible: state inconsistent");
  double lo = 0.0;
  for (int iter = 0; hi - lo >= epsilon && iter < 200; ++iter) {
    double mid = 0.5 * (hi + lo);
    if (feasible_at(mid))
      hi = mid;
    else
      lo = mid;
  }

  std::vector<double> fbar = ratio_bounds(cand, demand, hi);
  for (double& v : fbar)
    if (v < 0.0) v = 0.0;
  return normalize_ratios(fbar);
}

void apply_path_update(const Topology& topology, EdgeLoadState& state,
                       PathSplit& split, const DemandMatrix& demands,
                       const PathSet& paths, SdPair sd,
                       std::span<const double> new_ratios) {
  const auto [s, d] = sd;
  const auto& ps = paths.paths(s, d);
  if (new_ratios.size() != ps.size())
    throw InvariantViolation("ratio count does not match the candidate set");
  double sum = 0.0;
  for (double r : new_ratios) {
    if (r < -1e-12) throw InvariantViolation("negative split ratio");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw InvariantViolation("split ratios must sum to 1");

  const double demand = demands.at(s, d);
  std::vector<double> old = split.ratios(s, d);
  old.resize(ps.size(), 0.0);
  std::vector<double> next(new_ratios.begin(), new_ratios.end());
  for (double& r : next)
    if (r < 0.0) r = 0.0;
  split.set_ratios(s, d, next);
  if (demand <= 0.0) return;

  for (std::size_t p = 0; p < ps.size(); ++p) {
    double delta = (next[p] - old[p]) * demand;
    if (delta == 0.0) continue;
    for (std::size_t i = 0; i + 1 < ps[p].size(); ++i)
      add_load(topology, state, ps[p][i], ps[p][i + 1], delta);
  }
}

PathSplit path_cold_start(const Topology& topology, const DemandMatrix& demands,
                          const PathSet& paths) {
  const int n = topology.node_count();
  if (paths.node_count() != n)
    throw InvariantViolation("path set and topology disagree on node count");
  PathSplit split(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      const auto& ps = paths.paths(s, d);
      if (ps.empty()) {
        if (demands.at(s, d) > 0.0) throw NoPathError(s, d);
        continue;
      }
      std::vector<double> ratios(ps.size(), 0.0);
      std::size_t pick = 0;
      for (std::size_t p = 0; p < ps.size(); ++p)
        if (ps[p].size() == 2) {
          pick = p;
          break;
        }
      ratios[pick] = 1.0;
      split.set_ratios(s, d, std::move(ratios));
    }
  return split;
}

std::vector<SdPair> select_sds_path(const EdgeLoadState& state,
                                    const DemandMatrix& demands,
                                    const PathSet& paths) {
  const double mlu = max_utilization(state);
  std::unordered_set<std::size_t> emax;
  for (std::size_t e = 0; e < state.util.size(); ++e)
    if (state.util[e] >= mlu - 1e-9) emax.insert(e);

  struct Entry {
    SdPair sd;
    int hits;
  };
  std::vector<Entry> entries;
  for (auto sd : demands.demanded_pairs()) {
    std::unordered_set<std::size_t> touched;
    for (const Path& p : paths.paths(sd.first, sd.second))
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        std::size_t e = state.idx(p[i], p[i + 1]);
        if (emax.count(e)) touched.insert(e);
      }
    if (!touched.empty())
      entries.push_back({sd, static_cast<int>(touched.size())});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.hits != b.hits) return a.hits > b.hits;
    return a.sd < b.sd;
  });
  std::vector<SdPair> queue;
  queue.reserve(entries.size());
  for (const Entry& e : entries) queue.push_back(e.sd);
  return queue;
}

PathSolveResult path_ssdo(const Topology& topology, const DemandMatrix& demands,
                          const PathSet& paths, const PathSplit& initial,
                          const SolverConfig& config) {
  if (!(config.epsilon > 0.0) || !(config.epsilon0 > 0.0))
    throw InvariantViolation("tolerances must be positive");
  validate_path_split(demands, paths, initial);

  const auto t0 = Clock::now();
  PathSplit split = initial;
  EdgeLoadState state = path_utilization(topology, demands, paths, split);
  double mlu = max_utilization(state);

  SolveReport report;
  report.mlu_trajectory.push_back({seconds_since(t0), mlu});

  std::vector<SdPair> all_demanded = demands.demanded_pairs();
  double opt = mlu;
  bool out_of_budget = false;

  while (true) {
    ++report.iterations;
    const std::vector<SdPair> queue =
        config.static_traversal ? all_demanded
                                : select_sds_path(state, demands, paths);
    const double iteration_mlu = mlu;  // valid bracket top for every pair below

    for (SdPair sd : queue) {
      if (config.time_budget_seconds &&
          seconds_since(t0) >= *config.time_budget_seconds) {
        out_of_budget = true;
        break;
      }
      std::vector<double> ratios = pb_bbsm(topology, state, split, demands,
                                           paths, sd, config.epsilon,
                                           iteration_mlu);
      apply_path_update(topology, state, split, demands, paths, sd, ratios);
      ++report.sd_updates;
    }

    mlu = max_utilization(state);
    report.mlu_trajectory.push_back({seconds_since(t0), mlu});
    if (out_of_budget) {
      report.termination = Termination::budget_exhausted;
      break;
    }
    if (opt - mlu <= config.epsilon0) {
      report.termination = Termination::converged;
      break;
    }
    opt = mlu;
  }

  report.final_mlu = mlu;
  return {std::move(split), std::move(report)};
}

PathDualStartResult path_ssdo_dual_start(const Topology& topology,
                                         const DemandMatrix& demands,
                                         const PathSet& paths,
                                         const SolverConfig& config,
                                         const PathSplit& hot_start) {
  auto cold_future = std::async(std::launch::async, [&] {
    return path_ssdo(topology, demands, paths,
                     path_cold_start(topology, demands, paths), config);
  });
  PathSolveResult hot = path_ssdo(topology, demands, paths, hot_start, config);
  PathSolveResult cold = cold_future.get();

  SolveReport cold_report = cold.report;
  SolveReport hot_report = hot.report;
  const bool cold_selected = cold_report.final_mlu <= hot_report.final_mlu;
  return {cold_selected ? std::move(cold) : std::move(hot),
          std::move(cold_report), std::move(hot_report), cold_selected};
}

SplitTensor tensor_from_path_split(const PathSet& paths, const PathSplit& split) {
  const int n = paths.node_count();
  SplitTensor tensor(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      std::vector<NodeId> mids = paths.intermediates(s, d);
      const auto& ratios = split.ratios(s, d);
      for (std::size_t p = 0; p < mids.size() && p < ratios.size(); ++p)
        tensor.set(s, mids[p], d, ratios[p]);
    }
  return tensor;
}

PathSplit path_split_from_tensor(const PathSet& paths, const SplitTensor& split) {
  const int n = paths.node_count();
  PathSplit out(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      std::vector<NodeId> mids = paths.intermediates(s, d);
      if (mids.empty()) continue;
      std::vector<double> ratios(mids.size(), 0.0);
      for (std::size_t p = 0; p < mids.size(); ++p)
        ratios[p] = split.at(s, mids[p], d);
      out.set_ratios(s, d, std::move(ratios));
    }
  return out;
}

void validate_path_split(const DemandMatrix& demands, const PathSet& paths,
                         const PathSplit& split) {
  const int n = paths.node_count();
  if (split.node_count() != n || demands.node_count() != n)
    throw InvariantViolation("dimension mismatch");
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      const auto& ratios = split.ratios(s, d);
      const auto& ps = paths.paths(s, d);
      if (!ratios.empty() && ratios.size() != ps.size())
        throw InvariantViolation("ratio count does not match the candidate set");
      double sum = 0.0;
      for (double r : ratios) {
        if (r < 0.0) throw InvariantViolation("negative split ratio");
        sum += r;
      }
      if (demands.at(s, d) > 0.0) {
        if (ratios.empty())
          throw InvariantViolation("demanded pair lacks split ratios");
        if (std::abs(sum - 1.0) > 1e-9)
          throw InvariantViolation("split ratios of a pair must sum to 1");
      }
    }
}

}  // namespace ssdo
