#pragma once

#include "ssdo/dense.hpp"
#include "ssdo/path_form.hpp"

namespace ssdo {

// Exhaustive simplex-grid enumeration used to verify the solver at desk
// scale. Loads are accumulated here by direct summation over the raw
// formulas, independent of the incremental machinery it checks.

struct SubproblemOracleResult {
  double optimal_mlu = 0.0;
  std::vector<double> argmin;  // candidate order of paths.intermediates(s,d)
  double grid_step = 0.0;
};

/// Minimum global MLU over all grid split vectors for one pair, all other
/// ratios frozen. Caps: at most 4 candidates, step at most 1e-2. The argmin
/// is the first minimizer in lexicographic grid order.
SubproblemOracleResult grid_subproblem_optimum(const Topology& topology,
                                               const DemandMatrix& demands,
                                               const SplitTensor& split,
                                               const PathSet& paths, SdPair sd,
                                               double step);

struct OracleResult {
  double optimal_mlu = 0.0;
  PathSplit argmin;
  double grid_step = 0.0;
};

/// Minimum MLU over the product of per-pair simplex grids. Pairs without
/// demand or with a single candidate are fixed; the remaining free
/// dimensions must not exceed 6.
OracleResult grid_global_optimum(const Topology& topology,
                                 const DemandMatrix& demands,
                                 const PathSet& paths, double step);

}  // namespace ssdo
