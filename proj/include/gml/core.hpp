#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gml/cost.hpp"
#include "gml/protected_core.hpp"

namespace gml {

using RegimeId = std::string;

// ---------------------------------------------------------------------------
// Memory and evaluator specifications
// ---------------------------------------------------------------------------

struct InertMemory {
  bool operator==(const InertMemory&) const = default;
};
struct RetainedCompetence {
  double floor;
  bool operator==(const RetainedCompetence&) const = default;
};
struct BackgroundTheory {
  std::string theory_id;
  bool operator==(const BackgroundTheory&) const = default;
};

struct MemorySpec {
  std::variant<InertMemory, RetainedCompetence, BackgroundTheory> kind = InertMemory{};

  bool is_inert() const { return std::holds_alternative<InertMemory>(kind); }
  bool operator==(const MemorySpec&) const = default;
};

struct QuadraticLoss {
  Mat design;
  Vec target;
};
struct ProxyScore {
  std::string id;
};
struct LogicalGoal {
  std::string formula_id;
};

struct EvaluatorSpec {
  std::variant<QuadraticLoss, ProxyScore, LogicalGoal> kind;
  ProtectedCore protected_core;

  /// Scalar-valued evaluators, as opposed to logical ones.
  bool is_scalar() const { return !std::holds_alternative<LogicalGoal>(kind); }
};

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

struct Regime {
  RegimeId id;
  Eigen::Index state_dim = 0;
  MemorySpec memory;
  EvaluatorSpec evaluator;
  Eigen::Index obs_dim = 0;  // carrier dimensions recorded for typing only
  Eigen::Index act_dim = 0;
};

// ---------------------------------------------------------------------------
// Transitions
// ---------------------------------------------------------------------------

struct IdentityMap {};
struct LinearMap {
  Mat matrix;
  Vec offset;
};
struct GradientStepMap {
  double step;  // positive step on the source regime's quadratic evaluator
};
struct SyntacticInclusionMap {
  symbolic::Rename rename;
};

struct StateMap;
using StateMapKind =
    std::variant<IdentityMap, LinearMap, GradientStepMap, SyntacticInclusionMap,
                 std::vector<StateMap>>;  // last alternative: composition, applied in order

struct StateMap {
  StateMapKind kind = IdentityMap{};
};

struct RenameMemory {
  symbolic::Rename rename;
};
struct ReplaceMemory {
  MemorySpec spec;
};
struct MemoryMap {
  std::variant<IdentityMap, RenameMemory, ReplaceMemory> kind = IdentityMap{};
};

/// Monotone comparison transport on evaluator values. Scale must stay
/// strictly positive for the comparison to remain order-preserving.
struct Gauge {
  double scale = 1.0;
  double shift = 0.0;

  Gauge() = default;
  Gauge(double a, double b) : scale(a), shift(b) {
    if (!(scale > 0.0)) throw InvalidParams("gauge scale must be strictly positive");
  }
  static Gauge identity() { return {}; }
  bool is_identity() const { return scale == 1.0 && shift == 0.0; }
  double apply(double y) const { return scale * y + shift; }
  /// (other ∘ this): this applied first.
  Gauge then(const Gauge& other) const { return {other.scale * scale, other.scale * shift + other.shift}; }
};

struct Transition {
  std::string id;
  RegimeId source;
  RegimeId target;
  StateMap state_map;
  MemoryMap memory_map;
  Gauge gauge;
  Cost structural_cost;
};

/// Composite arrow from t1.source to t2.target; maps composed in order,
/// gauges composed as (t2 ∘ t1), costs added with INFINITE absorbing.
/// Throws NonComposable on endpoint mismatch.
Transition concat_path(const Transition& t1, const Transition& t2);

/// Apply a transition's state map to a state in the given source regime.
/// GradientStep requires the source evaluator to be a QuadraticLoss.
Vec apply_state_map(const Transition& t, const Regime& source, const Vec& state);

MemoryState apply_memory_map(const MemoryMap& m, const MemoryState& memory);

// ---------------------------------------------------------------------------
// Graph and system
// ---------------------------------------------------------------------------

struct RegimeGraph {
  std::map<RegimeId, Regime> regimes;
  std::vector<Transition> arrows;

  const Regime& regime(const RegimeId& id) const;
  const Transition* find_arrow(const std::string& arrow_id) const;
};

/// Returns a copy of the graph with the regime added.
/// Throws DuplicateRegimeId when the id is already present.
RegimeGraph add_regime(const RegimeGraph& graph, Regime r);

/// Returns a copy of the graph with the arrow added.
/// Throws UnknownRegime when an endpoint is missing.
RegimeGraph add_arrow(const RegimeGraph& graph, Transition t);

/// Graph restricted to arrows with finite structural cost; regimes retained.
RegimeGraph finite_cost_subgraph(const RegimeGraph& graph);

// ---------------------------------------------------------------------------
// Admissibility configuration (cost assignment policy of the certificate)
// ---------------------------------------------------------------------------

struct DeclaredCost {};
/// cost = c0 * ||anchor(target) - anchor(source)||^2, anchors taken from the
/// regimes' scalar-floor cores.
struct AnchorShiftCost {
  double c0;
};
/// finite cost 1.0 iff admissible, INFINITE otherwise.
struct EntailmentGateCost {};

struct AdmissibilityConfig {
  std::variant<DeclaredCost, AnchorShiftCost, EntailmentGateCost> cost_mode = DeclaredCost{};

  bool is_entailment_gate() const { return std::holds_alternative<EntailmentGateCost>(cost_mode); }
};

struct GmlSystem {
  RegimeGraph graph;
  AdmissibilityConfig admissibility;
  std::string label;
};

}  // namespace gml
