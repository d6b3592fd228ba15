#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "gml/errors.hpp"
#include "gml/symbolic.hpp"

namespace gml {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Runtime memory contents carried along a trajectory: named scalar
/// retained-competence summaries plus an optional background theory.
struct MemoryState {
  std::map<std::string, double> metrics;
  std::optional<symbolic::Theory> theory;

  bool operator==(const MemoryState&) const = default;
};

/// Trust-region floor: satisfied iff ||state - anchor|| <= radius.
struct ScalarFloor {
  Vec anchor;
  double radius;
};

/// Retained-competence floor: satisfied iff the named memory metric >= floor.
struct RetentionFloor {
  std::string metric;
  double floor;
};

/// Deductive core: satisfied iff the memory's theory entails the goal.
struct LogicalCore {
  symbolic::Goal goal;
};

class ProtectedCore {
 public:
  using Kind = std::variant<ScalarFloor, RetentionFloor, LogicalCore>;

  explicit ProtectedCore(ScalarFloor f);
  explicit ProtectedCore(RetentionFloor f);
  explicit ProtectedCore(LogicalCore f);

  const Kind& kind() const { return kind_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&kind_);
  }

 private:
  Kind kind_;
};

/// Absolute tolerance for scalar parameter equality in protected equivalence.
inline constexpr double kEquivalenceTolerance = 1e-12;

/// True iff the protected predicate holds on the given (state, memory).
bool evaluate_core(const ProtectedCore& core, const Vec& state, const MemoryState& memory);

/// Same variant kind and parameters equal up to kEquivalenceTolerance; for
/// logical cores, mutual entailment of the goals given the shared background.
bool protected_equivalent(const ProtectedCore& a, const ProtectedCore& b,
                          const symbolic::Theory* background = nullptr);

/// Canonical handle for a core's equivalence class. Two cores map to equal
/// classes exactly when protected_equivalent holds.
class ProtectedClass {
 public:
  ProtectedClass(ProtectedCore core, const symbolic::Theory* background = nullptr)
      : core_(std::move(core)), background_(background) {}

  const ProtectedCore& representative() const { return core_; }

  bool operator==(const ProtectedClass& other) const {
    return protected_equivalent(core_, other.core_, background_);
  }

 private:
  ProtectedCore core_;
  const symbolic::Theory* background_;
};

}  // namespace gml
