#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gml/core.hpp"

namespace gml {

/// One failure reason per clause of the admissibility certificate.
enum class FailureReason {
  IllTyped,
  TransportUnrealizable,
  EvaluatorIncompatible,
  ProtectedViolated,
  ComparisonUndefined,
  CompositionIneligible,
};

std::string to_string(FailureReason r);

struct ReasonEntry {
  FailureReason reason;
  std::optional<std::size_t> segment;  // set by chain certification
  std::string detail;

  bool operator==(const ReasonEntry& other) const {
    return reason == other.reason && segment == other.segment;
  }
};

struct Certificate {
  bool admissible = false;
  Cost cost;
  std::vector<ReasonEntry> reasons;

  /// Transported state and memory when the transport was realizable.
  std::optional<Vec> transported_state;
  std::optional<MemoryState> transported_memory;

  bool has_reason(FailureReason r) const;
};

/// The certificate Γ for a single transition evaluated at (state, memory):
/// typing, transport realizability, gauge monotonicity, protected
/// preservation on the transported pair, and cost assignment per the
/// system's cost mode. Throws UnknownRegime when an endpoint is missing.
Certificate certify(const GmlSystem& system, const Transition& t, const Vec& state,
                    const MemoryState& memory);

/// Certify a composable path segment by segment, evolving (state, memory)
/// through each admissible transition. Admissible iff every segment is and
/// every intermediate pair of protected cores is protected-equivalent; cost
/// is the sum of segment costs. Throws NonComposable on endpoint mismatch.
Certificate chain_certify(const GmlSystem& system, const std::vector<Transition>& path,
                          const Vec& state, const MemoryState& memory);

/// Chain admissibility bounds for per-segment failure probabilities:
/// product bound prod(1 - d_k) and union bound max(0, 1 - sum d_k).
struct PacBounds {
  double product_bound;
  double union_bound;
};

PacBounds pac_chain_bound(const std::vector<double>& deltas);

/// Empirical chain success frequency over independent Bernoulli segment
/// outcomes with success probabilities 1 - d_k. Deterministic given seed.
double pac_chain_simulate(const std::vector<double>& deltas, std::size_t trials, std::uint64_t seed);

/// Candidate update for the retention gate demonstration.
struct CandidateUpdate {
  double proxy_gain;
  double retained_competence;
};

/// Two candidates with identical proxy gain are certified against a retained-
/// competence floor; admissibility differs exactly when one crosses the floor.
std::pair<Certificate, Certificate> retention_gate_demo(double proxy_gain,
                                                        const CandidateUpdate& candidate_a,
                                                        const CandidateUpdate& candidate_b,
                                                        double floor);

}  // namespace gml
