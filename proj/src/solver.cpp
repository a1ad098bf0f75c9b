#include "ssdo/solver.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <unordered_set>

namespace ssdo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SplitTensor cold_start(const Topology& topology, const DemandMatrix& demands,
                       const PathSet& paths) {
  const int n = topology.node_count();
  SplitTensor split(n);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      std::vector<NodeId> mids = paths.intermediates(s, d);
      if (mids.empty()) {
        if (demands.at(s, d) > 0.0) throw NoPathError(s, d);
        continue;
      }
      // Direct edge when available, else the first candidate.
      NodeId pick = mids.front();
      for (NodeId k : mids)
        if (k == d) {
          pick = k;
          break;
        }
      split.set(s, pick, d, 1.0);
    }
  return split;
}

std::vector<SdPair> select_sds(const UtilizationState& state,
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

DenseSolveResult run(const Topology& topology, const DemandMatrix& demands,
                     const PathSet& paths, const SolverConfig& config,
                     const SplitTensor* hot_start) {
  if (!(config.epsilon > 0.0) || !(config.epsilon0 > 0.0))
    throw InvariantViolation("tolerances must be positive");
  if (config.time_budget_seconds && !(*config.time_budget_seconds > 0.0))
    throw InvariantViolation("time budget must be positive");

  const auto t0 = Clock::now();
  SplitTensor split = hot_start ? *hot_start : cold_start(topology, demands, paths);
  if (hot_start) {
    validate_split_tensor(topology, paths, split);
    for (auto [s, d] : demands.demanded_pairs())
      if (paths.paths(s, d).empty()) throw NoPathError(s, d);
  }

  UtilizationState state = compute_utilization(topology, demands, split);
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
                                : select_sds(state, demands, paths);
    const double iteration_mlu = mlu;  // valid upper bound for every view below

    for (SdPair sd : queue) {
      if (config.time_budget_seconds &&
          seconds_since(t0) >= *config.time_budget_seconds) {
        out_of_budget = true;
        break;
      }
      SubproblemView view =
          background_traffic(topology, state, split, demands, paths, sd,
                             LowerBoundMode::relevant_edges_only, iteration_mlu);
      std::vector<double> ratios = bbsm(view, config.epsilon, config.subproblem_style);
      apply_sd_update(topology, state, split, demands, paths, sd, ratios);
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

DualStartResult run_dual_start(const Topology& topology,
                               const DemandMatrix& demands,
                               const PathSet& paths, const SolverConfig& config,
                               const SplitTensor& hot_start) {
  auto cold_future = std::async(std::launch::async, [&] {
    return run(topology, demands, paths, config, nullptr);
  });
  DenseSolveResult hot = run(topology, demands, paths, config, &hot_start);
  DenseSolveResult cold = cold_future.get();

  SolveReport cold_report = cold.report;
  SolveReport hot_report = hot.report;
  const bool cold_selected = cold_report.final_mlu <= hot_report.final_mlu;
  return {cold_selected ? std::move(cold) : std::move(hot),
          std::move(cold_report), std::move(hot_report), cold_selected};
}

}  // namespace ssdo
