#include "gml/morphism.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace gml {

namespace {

Vec apply_plain_map(const StateMap& m, const Vec& s) {
  if (std::holds_alternative<IdentityMap>(m.kind)) return s;
  if (const auto* lin = std::get_if<LinearMap>(&m.kind)) {
    if (lin->matrix.cols() != s.size()) {
      throw DimensionMismatch("morphism state map incompatible with state dimension");
    }
    return lin->matrix * s + lin->offset;
  }
  throw InvalidConfig("morphism state maps must be identity or linear");
}

StateMap compose_plain_maps(const StateMap& first, const StateMap& second) {
  if (std::holds_alternative<IdentityMap>(first.kind)) return second;
  if (std::holds_alternative<IdentityMap>(second.kind)) return first;
  const auto* a = std::get_if<LinearMap>(&first.kind);
  const auto* b = std::get_if<LinearMap>(&second.kind);
  if (!a || !b) throw InvalidConfig("morphism state maps must be identity or linear");
  return {LinearMap{b->matrix * a->matrix, b->matrix * a->offset + b->offset}};
}

const StateMap& state_map_for(const GmlMorphism& m, const RegimeId& r) {
  static const StateMap kIdentity{};
  auto it = m.state_maps.find(r);
  return it == m.state_maps.end() ? kIdentity : it->second;
}

const MemoryMap& memory_map_for(const GmlMorphism& m, const RegimeId& r) {
  static const MemoryMap kIdentity{};
  auto it = m.memory_maps.find(r);
  return it == m.memory_maps.end() ? kIdentity : it->second;
}

const RegimeId& mapped_regime(const GmlMorphism& m, const RegimeId& r) {
  auto it = m.regime_map.find(r);
  if (it == m.regime_map.end()) throw PartialMap("regime " + r + " has no image");
  return it->second;
}

const Transition& mapped_arrow(const GmlSystem& dst, const GmlMorphism& m,
                               const Transition& arrow) {
  auto it = m.transition_map.find(arrow.id);
  if (it == m.transition_map.end()) throw PartialMap("arrow " + arrow.id + " has no image");
  const Transition* image = dst.graph.find_arrow(it->second);
  if (!image) throw PartialMap("arrow " + arrow.id + " maps to unknown arrow " + it->second);
  return *image;
}

void require_total(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m) {
  for (const auto& [id, regime] : src.graph.regimes) {
    const RegimeId& image = mapped_regime(m, id);
    src.graph.regime(id);
    dst.graph.regime(image);
    (void)regime;
  }
  for (const auto& arrow : src.graph.arrows) {
    const Transition& image = mapped_arrow(dst, m, arrow);
    if (image.source != mapped_regime(m, arrow.source) ||
        image.target != mapped_regime(m, arrow.target)) {
      throw InvalidConfig("arrow image endpoints disagree with the regime map");
    }
  }
}

/// States around the source anchor (when the core has one) plus a retained-
/// competence metric near the floor, so samples land on both sides of the
/// protected boundary.
struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{-1.0, 1.0};
  double spread;

  std::pair<Vec, MemoryState> draw(const Regime& regime) {
    Vec s = Vec::Zero(regime.state_dim);
    if (const auto* floor = regime.evaluator.protected_core.get_if<ScalarFloor>()) {
      s = floor->anchor;
    }
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] += spread * unit(rng);

    MemoryState memory;
    if (const auto* floor = regime.evaluator.protected_core.get_if<RetentionFloor>()) {
      memory.metrics[floor->metric] = floor->floor + spread * unit(rng);
    }
    return {std::move(s), std::move(memory)};
  }
};

bool equivalence_pairs_preserved(const GmlSystem& src, const GmlSystem& dst,
                                 const GmlMorphism& m) {
  for (auto a = src.graph.regimes.begin(); a != src.graph.regimes.end(); ++a) {
    for (auto b = std::next(a); b != src.graph.regimes.end(); ++b) {
      if (!protected_equivalent(a->second.evaluator.protected_core,
                                b->second.evaluator.protected_core)) {
        continue;
      }
      const Regime& fa = dst.graph.regime(mapped_regime(m, a->first));
      const Regime& fb = dst.graph.regime(mapped_regime(m, b->first));
      if (!protected_equivalent(fa.evaluator.protected_core, fb.evaluator.protected_core)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

GmlMorphism GmlMorphism::identity(const GmlSystem& system) {
  GmlMorphism m;
  m.faithful = true;
  for (const auto& [id, regime] : system.graph.regimes) {
    m.regime_map[id] = id;
    (void)regime;
  }
  for (const auto& arrow : system.graph.arrows) m.transition_map[arrow.id] = arrow.id;
  return m;
}

GmlMorphism compose(const GmlMorphism& m, const GmlMorphism& n) {
  GmlMorphism out;
  out.faithful = m.faithful && n.faithful;
  for (const auto& [r, image] : m.regime_map) {
    out.regime_map[r] = mapped_regime(n, image);
    out.state_maps[r] = compose_plain_maps(state_map_for(m, r), state_map_for(n, image));
    const MemoryMap& first = memory_map_for(m, r);
    const MemoryMap& second = memory_map_for(n, image);
    out.memory_maps[r] =
        std::holds_alternative<IdentityMap>(second.kind) ? first : second;
  }
  for (const auto& [a, image] : m.transition_map) {
    auto it = n.transition_map.find(image);
    if (it == n.transition_map.end()) throw PartialMap("arrow " + image + " has no image");
    out.transition_map[a] = it->second;
  }
  return out;
}

MorphismReport check_morphism(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                              const SampleSpec& samples) {
  require_total(src, dst, m);

  MorphismReport report;
  report.equivalence_preserved = equivalence_pairs_preserved(src, dst, m);
  report.verification = src.graph.arrows.empty() ? "structural" : "sampled";

  Sampler sampler{std::mt19937_64(samples.seed), {}, samples.spread};
  for (const auto& arrow : src.graph.arrows) {
    const Regime& source = src.graph.regime(arrow.source);
    for (std::size_t i = 0; i < samples.per_arrow; ++i) {
      auto [state, memory] = sampler.draw(source);
      Certificate here = certify(src, arrow, state, memory);
      if (!here.admissible) continue;
      ++report.admissible_samples;

      const Transition& image = mapped_arrow(dst, m, arrow);
      Vec mapped_state = apply_plain_map(state_map_for(m, arrow.source), state);
      MemoryState mapped_memory = apply_memory_map(memory_map_for(m, arrow.source), memory);
      Certificate there = certify(dst, image, mapped_state, mapped_memory);
      if (!there.admissible && !report.counterexample) {
        report.counterexample = MorphismCounterexample{arrow.id, image.id, std::move(mapped_state),
                                                       std::move(mapped_memory), there.reasons};
      }
    }
  }

  report.passed = report.equivalence_preserved && !report.counterexample;
  return report;
}

TrajectoryImage map_trajectory(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                               const std::vector<Transition>& path, const Vec& state,
                               const MemoryState& memory) {
  require_total(src, dst, m);

  TrajectoryImage out;
  out.source_certificate = chain_certify(src, path, state, memory);
  out.source_admissible = out.source_certificate.admissible;
  if (!out.source_admissible || path.empty()) return out;

  for (const auto& arrow : path) out.image_path.push_back(mapped_arrow(dst, m, arrow));
  Vec mapped_state = apply_plain_map(state_map_for(m, path.front().source), state);
  MemoryState mapped_memory = apply_memory_map(memory_map_for(m, path.front().source), memory);
  out.image_certificate = chain_certify(dst, out.image_path, mapped_state, mapped_memory);
  return out;
}

bool is_protected_faithful(const GmlSystem& src, const GmlSystem& dst, const GmlMorphism& m,
                           const SampleSpec& samples) {
  require_total(src, dst, m);

  for (auto a = src.graph.regimes.begin(); a != src.graph.regimes.end(); ++a) {
    for (auto b = std::next(a); b != src.graph.regimes.end(); ++b) {
      const Regime& fa = dst.graph.regime(mapped_regime(m, a->first));
      const Regime& fb = dst.graph.regime(mapped_regime(m, b->first));
      const bool image_equivalent =
          protected_equivalent(fa.evaluator.protected_core, fb.evaluator.protected_core);
      const bool source_equivalent = protected_equivalent(a->second.evaluator.protected_core,
                                                          b->second.evaluator.protected_core);
      if (image_equivalent && !source_equivalent) return false;
    }
  }

  Sampler sampler{std::mt19937_64(samples.seed), {}, samples.spread};
  for (const auto& arrow : src.graph.arrows) {
    const Regime& source = src.graph.regime(arrow.source);
    for (std::size_t i = 0; i < samples.per_arrow; ++i) {
      auto [state, memory] = sampler.draw(source);
      const Transition& image = mapped_arrow(dst, m, arrow);
      Vec mapped_state = apply_plain_map(state_map_for(m, arrow.source), state);
      MemoryState mapped_memory = apply_memory_map(memory_map_for(m, arrow.source), memory);
      Certificate there = certify(dst, image, mapped_state, mapped_memory);
      if (!there.admissible) continue;
      Certificate here = certify(src, arrow, state, memory);
      if (!here.admissible) return false;
    }
  }
  return true;
}

std::pair<MitchellTuple, CollapseReport> mitchell_collapse(const GmlSystem& src) {
  const auto& regimes = src.graph.regimes;

  bool memory_inert = true;
  bool scalar_evaluators = true;
  bool retention_gated = false;
  bool logical_cores = false;
  bool ordinary_comparison = true;
  bool identity_arrows_only = true;
  bool core_trivial_arrows = true;
  for (const auto& [id, regime] : regimes) {
    (void)id;
    if (!regime.memory.is_inert()) memory_inert = false;
    if (std::holds_alternative<RetainedCompetence>(regime.memory.kind)) retention_gated = true;
    if (!regime.evaluator.is_scalar()) scalar_evaluators = false;
    if (regime.evaluator.protected_core.get_if<RetentionFloor>()) retention_gated = true;
    if (regime.evaluator.protected_core.get_if<LogicalCore>()) logical_cores = true;
  }
  bool cross_class_arrow = false;
  for (const auto& arrow : src.graph.arrows) {
    if (!arrow.gauge.is_identity()) ordinary_comparison = false;
    if (arrow.source != arrow.target || !std::holds_alternative<IdentityMap>(arrow.state_map.kind) ||
        !std::holds_alternative<IdentityMap>(arrow.memory_map.kind) || !arrow.gauge.is_identity()) {
      identity_arrows_only = false;
    }
    const Regime& a = src.graph.regime(arrow.source);
    const Regime& b = src.graph.regime(arrow.target);
    if (!protected_equivalent(a.evaluator.protected_core, b.evaluator.protected_core)) {
      cross_class_arrow = true;
      core_trivial_arrows = false;
    }
  }

  bool single_class = true;
  for (auto a = regimes.begin(); a != regimes.end() && single_class; ++a) {
    for (auto b = std::next(a); b != regimes.end(); ++b) {
      if (!protected_equivalent(a->second.evaluator.protected_core,
                                b->second.evaluator.protected_core)) {
        single_class = false;
        break;
      }
    }
  }

  bool core_is_evaluator = true;
  for (const auto& [id, regime] : regimes) {
    (void)id;
    const auto* floor = regime.evaluator.protected_core.get_if<ScalarFloor>();
    if (!floor || std::isfinite(floor->radius)) core_is_evaluator = false;
  }

  const bool entailment_gated = src.admissibility.is_entailment_gate();

  CollapseReport report;
  report.degeneration = {regimes.size() == 1,
                         identity_arrows_only,
                         memory_inert && !retention_gated,
                         scalar_evaluators,
                         core_is_evaluator,
                         regimes.size() == 1 && memory_inert};
  report.reducibility = {single_class, core_trivial_arrows, memory_inert && !retention_gated,
                         scalar_evaluators, ordinary_comparison};

  if (retention_gated) report.obstructions.push_back("admissibility-critical memory");
  if (cross_class_arrow) report.obstructions.push_back("quotient-restricted comparability");
  if (entailment_gated || logical_cores) {
    report.obstructions.push_back("non-aggregable protected cores");
  }
  report.faithful = report.obstructions.empty();

  const Eigen::Index dim = regimes.empty() ? 0 : regimes.begin()->second.state_dim;
  EvaluatorSpec evaluator{
      ProxyScore{"P"},
      ProtectedCore(ScalarFloor{Vec::Zero(dim), std::numeric_limits<double>::infinity()})};

  Regime node{"r0", dim, MemorySpec{}, evaluator};
  report.image.label = src.label.empty() ? "mitchell-image" : src.label + "-mitchell-image";
  report.image.graph = add_regime(report.image.graph, node);
  report.image.graph = add_arrow(
      report.image.graph, Transition{"id_r0", "r0", "r0", {}, {}, Gauge::identity(),
                                     Cost::finite(0.0)});

  MitchellTuple tuple{"E", "T", evaluator};
  return {std::move(tuple), std::move(report)};
}

}  // namespace gml
