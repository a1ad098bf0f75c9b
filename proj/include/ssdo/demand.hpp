#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ssdo/errors.hpp"

namespace ssdo {

using NodeId = int;
using SdPair = std::pair<NodeId, NodeId>;

/// Square matrix of nonnegative traffic demands with a zero diagonal.
class DemandMatrix {
 public:
  explicit DemandMatrix(int node_count)
      : n_(node_count), values_(static_cast<std::size_t>(node_count) * node_count, 0.0) {
    if (node_count <= 0) throw InvariantViolation("demand matrix needs at least one node");
  }

  int node_count() const { return n_; }

  double at(NodeId i, NodeId j) const { return values_[idx(i, j)]; }

  void set(NodeId i, NodeId j, double value) {
    if (i == j && value != 0.0)
      throw InvariantViolation("demand diagonal must stay zero");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw InvariantViolation("demands must be finite and nonnegative");
    values_[idx(i, j)] = value;
  }

  double total() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
  }

  /// Pairs with strictly positive demand, ascending by (src, dst).
  std::vector<SdPair> demanded_pairs() const {
    std::vector<SdPair> out;
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = 0; j < n_; ++j)
        if (values_[idx(i, j)] > 0.0) out.emplace_back(i, j);
    return out;
  }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const DemandMatrix& other) const = default;

 private:
  std::size_t idx(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_;
  std::vector<double> values_;
};

/// Ordered demand snapshots taken at a fixed interval.
struct DemandSeries {
  std::string interval_label;
  std::vector<DemandMatrix> snapshots;
};

}  // namespace ssdo
