#include "gml/core.hpp"

#include <algorithm>

namespace gml {

namespace {

bool is_identity(const StateMap& m) { return std::holds_alternative<IdentityMap>(m.kind); }

std::vector<StateMap> flatten(const StateMap& m) {
  if (const auto* seq = std::get_if<std::vector<StateMap>>(&m.kind)) return *seq;
  return {m};
}

StateMap compose_state_maps(const StateMap& first, const StateMap& second) {
  if (is_identity(first)) return second;
  if (is_identity(second)) return first;
  const auto* l1 = std::get_if<LinearMap>(&first.kind);
  const auto* l2 = std::get_if<LinearMap>(&second.kind);
  if (l1 && l2) {
    return StateMap{LinearMap{l2->matrix * l1->matrix, l2->matrix * l1->offset + l2->offset}};
  }
  auto seq = flatten(first);
  auto tail = flatten(second);
  seq.insert(seq.end(), tail.begin(), tail.end());
  return StateMap{std::move(seq)};
}

MemoryMap compose_memory_maps(const MemoryMap& first, const MemoryMap& second) {
  if (std::holds_alternative<ReplaceMemory>(second.kind)) return second;
  if (std::holds_alternative<IdentityMap>(second.kind)) return first;
  // second is a rename
  const auto& r2 = std::get<RenameMemory>(second.kind).rename;
  if (std::holds_alternative<IdentityMap>(first.kind)) return second;
  if (const auto* r1 = std::get_if<RenameMemory>(&first.kind)) {
    symbolic::Rename composed = r2;
    for (const auto& [from, to] : r1->rename) composed[from] = symbolic::apply_rename(r2, to);
    return MemoryMap{RenameMemory{std::move(composed)}};
  }
  // replace then rename: keep the replace, rename applies to runtime contents
  return second;
}

}  // namespace

Transition concat_path(const Transition& t1, const Transition& t2) {
  if (t1.target != t2.source) {
    throw NonComposable("cannot concatenate: " + t1.id + " ends at '" + t1.target +
                        "' but " + t2.id + " starts at '" + t2.source + "'");
  }
  Transition out;
  out.id = t1.id + ";" + t2.id;
  out.source = t1.source;
  out.target = t2.target;
  out.state_map = compose_state_maps(t1.state_map, t2.state_map);
  out.memory_map = compose_memory_maps(t1.memory_map, t2.memory_map);
  out.gauge = t1.gauge.then(t2.gauge);
  out.structural_cost = t1.structural_cost + t2.structural_cost;
  return out;
}

Vec apply_state_map(const Transition& t, const Regime& source, const Vec& state) {
  struct Applier {
    const Regime& source;
    const Vec& state;

    Vec operator()(const IdentityMap&) const { return state; }

    Vec operator()(const LinearMap& m) const {
      if (m.matrix.cols() != state.size()) {
        throw DimensionMismatch("linear map expects dimension " + std::to_string(m.matrix.cols()) +
                                ", state has " + std::to_string(state.size()));
      }
      return m.matrix * state + m.offset;
    }

    Vec operator()(const GradientStepMap& m) const {
      const auto* q = std::get_if<QuadraticLoss>(&source.evaluator.kind);
      if (!q) throw InvalidConfig("gradient-step transport requires a quadratic evaluator");
      if (q->design.cols() != state.size()) {
        throw DimensionMismatch("design matrix expects dimension " +
                                std::to_string(q->design.cols()));
      }
      return state - m.step * q->design.transpose() * (q->design * state - q->target);
    }

    Vec operator()(const SyntacticInclusionMap&) const {
      // Acts on the symbolic memory; the numeric state passes through.
      return state;
    }

    Vec operator()(const std::vector<StateMap>& seq) const {
      Vec s = state;
      for (const auto& step : seq) {
        Transition sub;
        sub.state_map = step;
        s = apply_state_map(sub, source, s);
      }
      return s;
    }
  };
  return std::visit(Applier{source, state}, t.state_map.kind);
}

MemoryState apply_memory_map(const MemoryMap& m, const MemoryState& memory) {
  if (std::holds_alternative<IdentityMap>(m.kind)) return memory;
  if (const auto* r = std::get_if<RenameMemory>(&m.kind)) {
    MemoryState out = memory;
    if (memory.theory) {
      symbolic::require_injective(r->rename, memory.theory->vocabulary());
      out.theory = symbolic::rename_theory(r->rename, *memory.theory);
    }
    return out;
  }
  const auto& spec = std::get<ReplaceMemory>(m.kind).spec;
  MemoryState out = memory;
  if (!std::holds_alternative<BackgroundTheory>(spec.kind)) out.theory.reset();
  return out;
}

const Regime& RegimeGraph::regime(const RegimeId& id) const {
  auto it = regimes.find(id);
  if (it == regimes.end()) throw UnknownRegime("no regime with id '" + id + "'");
  return it->second;
}

const Transition* RegimeGraph::find_arrow(const std::string& arrow_id) const {
  auto it = std::find_if(arrows.begin(), arrows.end(),
                         [&](const Transition& t) { return t.id == arrow_id; });
  return it == arrows.end() ? nullptr : &*it;
}

RegimeGraph add_regime(const RegimeGraph& graph, Regime r) {
  if (graph.regimes.count(r.id)) throw DuplicateRegimeId("regime '" + r.id + "' already present");
  if (r.state_dim < 0) throw InvalidParams("state_dim must be nonnegative");
  RegimeGraph out = graph;
  out.regimes.emplace(r.id, std::move(r));
  return out;
}

RegimeGraph add_arrow(const RegimeGraph& graph, Transition t) {
  if (!graph.regimes.count(t.source)) throw UnknownRegime("arrow source '" + t.source + "' unknown");
  if (!graph.regimes.count(t.target)) throw UnknownRegime("arrow target '" + t.target + "' unknown");
  RegimeGraph out = graph;
  out.arrows.push_back(std::move(t));
  return out;
}

RegimeGraph finite_cost_subgraph(const RegimeGraph& graph) {
  RegimeGraph out;
  out.regimes = graph.regimes;
  for (const auto& a : graph.arrows) {
    if (!a.structural_cost.is_infinite()) out.arrows.push_back(a);
  }
  return out;
}

}  // namespace gml
