#pragma once

#include <stdexcept>
#include <string>

namespace ssdo {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No route exists between a source and destination that needs one.
class NoPathError : public Error {
 public:
  NoPathError(int src, int dst)
      : Error("no path from node " + std::to_string(src) + " to node " +
              std::to_string(dst)),
        src(src),
        dst(dst) {}
  int src;
  int dst;
};

/// A failure scenario cuts off a source-destination pair that carries demand.
class DisconnectsError : public Error {
 public:
  DisconnectsError(int src, int dst)
      : Error("failure scenario disconnects demanded pair (" +
              std::to_string(src) + "," + std::to_string(dst) + ")"),
        src(src),
        dst(dst) {}
  int src;
  int dst;
};

/// Subproblem requested for a pair with zero demand.
class ZeroDemandError : public Error {
 public:
  ZeroDemandError(int src, int dst)
      : Error("zero demand for pair (" + std::to_string(src) + "," +
              std::to_string(dst) + ")"),
        src(src),
        dst(dst) {}
  int src;
  int dst;
};

/// The feasibility predicate fails even at the search upper bound, which
/// signals an inconsistent utilization state.
class NeverFeasibleError : public Error {
 public:
  using Error::Error;
};

/// Gravity model cannot assign demands because every node weight is zero.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// A zero-capacity edge carries positive load.
class CapacityZeroWithLoadError : public Error {
 public:
  CapacityZeroWithLoadError(int src, int dst)
      : Error("zero-capacity edge (" + std::to_string(src) + "," +
              std::to_string(dst) + ") carries load"),
        src(src),
        dst(dst) {}
  int src;
  int dst;
};

/// Exhaustive enumeration refused: instance exceeds the oracle size caps.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented structural invariant.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ssdo
