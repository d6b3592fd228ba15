#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gml/admissibility.hpp"

namespace gml {

/// A system map: regimes to regimes, per-regime state and memory maps, arrows
/// to arrows. State maps are restricted to identity or linear.
struct GmlMorphism {
  std::map<RegimeId, RegimeId> regime_map;
  std::map<RegimeId, StateMap> state_maps;    // missing entry means identity
  std::map<RegimeId, MemoryMap> memory_maps;  // missing entry means identity
  std::map<std::string, std::string> transition_map;
  bool faithful = false;

  static GmlMorphism identity(const GmlSystem& system);
};

/// Composite n after m (m applied first). Throws PartialMap when an image of
/// m has no entry under n.
GmlMorphism compose(const GmlMorphism& m, const GmlMorphism& n);

/// Deterministic per-arrow test-state generator settings.
struct SampleSpec {
  std::size_t per_arrow = 25;
  std::uint64_t seed = 0;
  double spread = 1.0;
};

struct MorphismCounterexample {
  std::string arrow;
  std::string mapped_arrow;
  Vec state;
  MemoryState memory;
  std::vector<ReasonEntry> image_reasons;
};

struct MorphismReport {
  bool passed = false;
  bool equivalence_preserved = false;
  std::size_t admissible_samples = 0;  // source-admissible samples checked
  std::optional<MorphismCounterexample> counterexample;

  /// "structural" when no sampling was needed, otherwise "sampled".
  std::string verification;
};

/// Preservation check: every sampled source-admissible (arrow, state, memory)
/// maps to a target-admissible triple, and protected-equivalent regime pairs
/// map to protected-equivalent pairs. Throws PartialMap when the morphism is
/// not total on src.
MorphismReport check_morphism(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                              const SampleSpec& samples = {});

struct TrajectoryImage {
  bool source_admissible = false;  // false means the proposition makes no claim
  std::vector<Transition> image_path;
  Certificate source_certificate;
  Certificate image_certificate;
};

/// Image of a path under the morphism, chain-certified in the target.
TrajectoryImage map_trajectory(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                               const std::vector<Transition>& path, const Vec& state,
                               const MemoryState& memory);

/// Reflection check: image equivalence implies source equivalence and image
/// admissibility of mapped samples implies source admissibility.
bool is_protected_faithful(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                           const SampleSpec& samples = {});

/// The fixed-ontology triple recovered by the one-regime collapse.
struct MitchellTuple {
  std::string experience;
  std::string task;
  EvaluatorSpec evaluator;
};

struct CollapseReport {
  /// Degeneration conditions evaluated on the source system: single regime,
  /// identity-only arrows, inert memory, scalar evaluators, core equal to the
  /// evaluator, fixed task and experience.
  std::array<bool, 6> degeneration{};
  /// Reducibility conditions: one equivalence class, core-trivial arrows,
  /// memory-free admissibility, common scalar representative, ordinary
  /// comparison.
  std::array<bool, 5> reducibility{};
  bool faithful = false;
  std::vector<std::string> obstructions;  // nonempty exactly when not faithful
  GmlSystem image;
};

/// Collapse to a one-regime image with a single identity arrow and an
/// unconstrained trust region, and classify the collapse FAITHFUL or LOSSY.
std::pair<MitchellTuple, CollapseReport> mitchell_collapse(const GmlSystem& src);

}  // namespace gml
