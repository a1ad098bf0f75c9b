#include "ssdo/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace ssdo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilitySlack = 1e-12;

double edge_util(const Topology& g, NodeId i, NodeId j, double load) {
  double c = g.capacity(i, j);
  if (std::isnan(c) || std::isinf(c) || c == 0.0) return 0.0;
  return load / c;
}

void add_load(const Topology& g, UtilizationState& state, NodeId i, NodeId j,
              double delta) {
  double& l = state.load[state.idx(i, j)];
  l += delta;
  if (l < 0.0) l = 0.0;  // rounding residue from subtract-then-add updates
  state.util[state.idx(i, j)] = edge_util(g, i, j, l);
}

// Normalization that tolerates +inf bounds (paths whose edges never
// saturate): all weight goes to those paths, split evenly.
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

double clamped_sum(const std::vector<double>& fbar) {
  double sum = 0.0;
  for (double v : fbar) {
    if (std::isinf(v)) return kInf;
    if (v > 0.0) sum += v;
  }
  return sum;
}

}  // namespace

UtilizationState compute_utilization(const Topology& topology,
                                     const DemandMatrix& demands,
                                     const SplitTensor& split) {
  const int n = topology.node_count();
  if (demands.node_count() != n || split.node_count() != n)
    throw InvariantViolation("dimension mismatch");

  UtilizationState state(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      double d = demands.at(i, j);
      if (d <= 0.0) continue;
      double direct = split.at(i, j, j);
      if (direct > 0.0) state.load[state.idx(i, j)] += direct * d;
      for (NodeId k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double f = split.at(i, k, j);
        if (f <= 0.0) continue;
        state.load[state.idx(i, k)] += f * d;
        state.load[state.idx(k, j)] += f * d;
      }
    }

  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      double l = state.load[state.idx(i, j)];
      if (l <= 0.0) continue;
      if (!topology.has_edge(i, j))
        throw InvariantViolation("split routes traffic over a missing edge");
      if (!topology.unbounded(i, j) && topology.capacity(i, j) == 0.0 && l > 1e-12)
        throw CapacityZeroWithLoadError(i, j);
      state.util[state.idx(i, j)] = edge_util(topology, i, j, l);
    }
  return state;
}

double max_utilization(const UtilizationState& state) {
  double mlu = 0.0;
  for (double u : state.util)
    if (u > mlu) mlu = u;
  return mlu;
}

SubproblemView background_traffic(const Topology& topology,
                                  const UtilizationState& state,
                                  const SplitTensor& split,
                                  const DemandMatrix& demands,
                                  const PathSet& paths, SdPair sd,
                                  LowerBoundMode lb_mode,
                                  std::optional<double> known_mlu) {
  const auto [s, d] = sd;
  SubproblemView view;
  view.src = s;
  view.dst = d;
  view.demand = demands.at(s, d);
  view.mids = paths.intermediates(s, d);
  view.leg_offset.reserve(view.mids.size() + 1);
  view.leg_offset.push_back(0);

  auto push_leg = [&](NodeId i, NodeId j, double own) {
    if (topology.unbounded(i, j)) return;  // never constrains
    double q = state.load_at(i, j) - own;
    if (q < 0.0) {
      if (q < -1e-6)
        throw InvariantViolation("utilization state inconsistent with split");
      q = 0.0;
    }
    view.legs.push_back({Edge{i, j}, topology.capacity(i, j), q});
  };

  for (NodeId k : view.mids) {
    double own = split.at(s, k, d) * view.demand;
    if (k == d) {
      push_leg(s, d, own);
    } else {
      push_leg(s, k, own);
      push_leg(k, d, own);
    }
    view.leg_offset.push_back(static_cast<int>(view.legs.size()));
  }

  double lb = 0.0;
  for (const auto& leg : view.legs)
    if (leg.cap > 0.0) lb = std::max(lb, leg.background / leg.cap);
  if (lb_mode == LowerBoundMode::exact) {
    std::unordered_set<std::size_t> touched;
    for (const auto& leg : view.legs)
      touched.insert(state.idx(leg.edge.src, leg.edge.dst));
    for (std::size_t e = 0; e < state.util.size(); ++e)
      if (!touched.count(e)) lb = std::max(lb, state.util[e]);
  }
  view.u_lb = lb;
  view.u_ub = known_mlu ? *known_mlu : max_utilization(state);
  return view;
}

std::vector<double> residual_ratios(const SubproblemView& view, double u0) {
  if (!(view.demand > 0.0)) throw ZeroDemandError(view.src, view.dst);
  std::vector<double> fbar(view.mids.size(), 0.0);
  for (std::size_t m = 0; m < view.mids.size(); ++m) {
    double t = kInf;
    for (int e = view.leg_offset[m]; e < view.leg_offset[m + 1]; ++e) {
      const auto& leg = view.legs[e];
      t = std::min(t, u0 * leg.cap - leg.background);
    }
    fbar[m] = std::isinf(t) ? t : t / view.demand;
  }
  return fbar;
}

std::optional<std::vector<double>> feasibility_check(std::span<const double> fbar) {
  double sum = 0.0;
  double lowest = kInf;
  bool has_inf = false;
  for (double v : fbar) {
    if (std::isinf(v)) {
      has_inf = true;
      continue;
    }
    sum += v;
    lowest = std::min(lowest, v);
  }
  if (!fbar.empty() && lowest < -kFeasibilitySlack && !std::isinf(lowest))
    return std::nullopt;
  if (!has_inf && sum < 1.0 - kFeasibilitySlack) return std::nullopt;

  std::vector<double> raw(fbar.begin(), fbar.end());
  if (has_inf) return normalize_ratios(raw);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / sum;
  return out;
}

std::vector<double> balanced_ratios(std::span<const double> fbar) {
  std::vector<double> out(fbar.begin(), fbar.end());
  for (double& v : out)
    if (v < 0.0) v = 0.0;
  return out;
}

std::pair<double, double> search_bounds(const SubproblemView& view) {
  return {view.u_lb, view.u_ub};
}

std::vector<double> bbsm(const SubproblemView& view, double epsilon,
                         SubproblemStyle style) {
  if (!(epsilon > 0.0)) throw InvariantViolation("epsilon must be positive");
  if (!(view.demand > 0.0)) throw ZeroDemandError(view.src, view.dst);

  // The balanced search clamps negative bounds; the vertex ablation uses
  // the plain feasibility judgment, which lands at the subproblem-optimal
  // level instead of the balanced one.
  auto feasible_at = [&](double u) {
    std::vector<double> fbar = residual_ratios(view, u);
    if (style == SubproblemStyle::balanced)
      return clamped_sum(fbar) >= 1.0 - kFeasibilitySlack;
    double sum = 0.0;
    for (double v : fbar) {
      if (std::isinf(v)) return true;
      if (v < -kFeasibilitySlack) return false;
      sum += v;
    }
    return sum >= 1.0 - kFeasibilitySlack;
  };

  double hi = view.u_ub;
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

  std::vector<double> fbar = residual_ratios(view, hi);
  if (style == SubproblemStyle::balanced)
    return normalize_ratios(balanced_ratios(fbar));

  // Greedy fill in candidate order: some vertex of the optimal set.
  std::vector<double> out(fbar.size(), 0.0);
  double remaining = 1.0;
  for (std::size_t i = 0; i < fbar.size() && remaining > 0.0; ++i) {
    double room = std::isinf(fbar[i]) ? remaining : std::max(0.0, fbar[i]);
    double take = std::min(remaining, room);
    out[i] = take;
    remaining -= take;
  }
  double sum = 1.0 - remaining;
  if (sum <= 0.0) throw NeverFeasibleError("greedy fill found no capacity");
  for (double& v : out) v /= sum;
  return out;
}

void apply_sd_update(const Topology& topology, UtilizationState& state,
                     SplitTensor& split, const DemandMatrix& demands,
                     const PathSet& paths, SdPair sd,
                     std::span<const double> new_ratios) {
  const auto [s, d] = sd;
  const std::vector<NodeId> mids = paths.intermediates(s, d);
  if (new_ratios.size() != mids.size())
    throw InvariantViolation("ratio count does not match the candidate set");
  double sum = 0.0;
  for (double r : new_ratios) {
    if (r < -1e-12) throw InvariantViolation("negative split ratio");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw InvariantViolation("split ratios must sum to 1");

  const double demand = demands.at(s, d);
  for (std::size_t m = 0; m < mids.size(); ++m) {
    NodeId k = mids[m];
    double r = std::max(0.0, new_ratios[m]);
    double delta = (r - split.at(s, k, d)) * demand;
    split.set(s, k, d, r);
    if (demand <= 0.0 || delta == 0.0) continue;
    if (k == d) {
      add_load(topology, state, s, d, delta);
    } else {
      add_load(topology, state, s, k, delta);
      add_load(topology, state, k, d, delta);
    }
  }
}

void validate_split_tensor(const Topology& topology, const PathSet& paths,
                           const SplitTensor& split) {
  const int n = topology.node_count();
  if (split.node_count() != n || paths.node_count() != n)
    throw InvariantViolation("dimension mismatch");
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) {
        for (NodeId k = 0; k < n; ++k)
          if (split.at(i, k, j) != 0.0)
            throw InvariantViolation("self-pair split ratio must be zero");
        continue;
      }
      std::vector<NodeId> mids = paths.intermediates(i, j);
      std::unordered_set<NodeId> allowed(mids.begin(), mids.end());
      double sum = 0.0;
      for (NodeId k = 0; k < n; ++k) {
        double f = split.at(i, k, j);
        if (f < 0.0) throw InvariantViolation("negative split ratio");
        if (f > 0.0 && !allowed.count(k))
          throw InvariantViolation("split ratio outside the candidate set");
        sum += f;
      }
      if (!mids.empty() && std::abs(sum - 1.0) > 1e-9)
        throw InvariantViolation("split ratios of a pair must sum to 1");
    }
}

}  // namespace ssdo
