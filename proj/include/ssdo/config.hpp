#pragma once

#include <optional>
#include <vector>

namespace ssdo {

enum class SubproblemStyle {
  balanced,       // the balanced solution found by the clamped binary search
  greedy_vertex,  // an arbitrary vertex of the optimal set (test ablation)
};

struct SolverConfig {
  /// Binary-search bracket tolerance for each subproblem.
  double epsilon = 1e-6;
  /// Stop when an outer iteration reduces the MLU by no more than this.
  double epsilon0 = 1e-6;
  /// Optional wall-clock budget; checked between subproblem updates.
  std::optional<double> time_budget_seconds;
  /// Ablation: visit every demanded pair in index order each iteration
  /// instead of prioritizing pairs on the most utilized edges.
  bool static_traversal = false;
  /// Ablation: how each subproblem's solution is picked among its optima.
  SubproblemStyle subproblem_style = SubproblemStyle::balanced;
};

enum class Termination { converged, budget_exhausted };

struct TrajectoryPoint {
  double seconds;
  double mlu;
};

struct SolveReport {
  /// Initial MLU followed by the MLU after each outer iteration.
  std::vector<TrajectoryPoint> mlu_trajectory;
  long iterations = 0;
  long sd_updates = 0;
  Termination termination = Termination::converged;
  double final_mlu = 0.0;
};

}  // namespace ssdo
