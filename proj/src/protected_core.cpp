#include "gml/protected_core.hpp"

#include <cmath>

namespace gml {

ProtectedCore::ProtectedCore(ScalarFloor f) : kind_(std::move(f)) {
  const auto& sf = std::get<ScalarFloor>(kind_);
  if (!(sf.radius > 0.0)) throw InvalidParams("scalar floor radius must be positive");
}

ProtectedCore::ProtectedCore(RetentionFloor f) : kind_(std::move(f)) {
  const auto& rf = std::get<RetentionFloor>(kind_);
  if (!std::isfinite(rf.floor)) throw InvalidParams("retention floor must be finite");
}

ProtectedCore::ProtectedCore(LogicalCore f) : kind_(std::move(f)) {
  const auto& lc = std::get<LogicalCore>(kind_);
  if (lc.goal.atoms.empty()) throw InvalidParams("logical core goal must be nonempty");
}

bool evaluate_core(const ProtectedCore& core, const Vec& state, const MemoryState& memory) {
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ScalarFloor>) {
          if (state.size() != c.anchor.size()) {
            throw DimensionMismatch("state dimension " + std::to_string(state.size()) +
                                    " does not match anchor dimension " +
                                    std::to_string(c.anchor.size()));
          }
          return (state - c.anchor).norm() <= c.radius;
        } else if constexpr (std::is_same_v<T, RetentionFloor>) {
          auto it = memory.metrics.find(c.metric);
          if (it == memory.metrics.end()) {
            throw MissingMemoryField("memory does not carry metric '" + c.metric + "'");
          }
          return it->second >= c.floor;
        } else {
          if (!memory.theory) throw MissingMemoryField("memory does not carry a theory");
          return symbolic::entails(*memory.theory, c.goal);
        }
      },
      core.kind());
}

namespace {

bool goals_bientail(const symbolic::Goal& a, const symbolic::Goal& b,
                    const symbolic::Theory* background) {
  symbolic::Theory base = background ? *background : symbolic::Theory{};
  auto with_facts = [&](const symbolic::Goal& g) {
    symbolic::Theory t = base;
    for (const auto& atom : g.atoms) t.add_fact(atom);
    return t;
  };
  return symbolic::entails(with_facts(a), b) && symbolic::entails(with_facts(b), a);
}

}  // namespace

bool protected_equivalent(const ProtectedCore& a, const ProtectedCore& b,
                          const symbolic::Theory* background) {
  if (a.kind().index() != b.kind().index()) return false;

  if (const auto* sa = a.get_if<ScalarFloor>()) {
    const auto* sb = b.get_if<ScalarFloor>();
    if (sa->anchor.size() != sb->anchor.size()) return false;
    // radii may both be infinite (unconstrained regions are equivalent)
    const bool radii_equal = sa->radius == sb->radius ||
                             std::abs(sa->radius - sb->radius) <= kEquivalenceTolerance;
    return (sa->anchor - sb->anchor).lpNorm<Eigen::Infinity>() <= kEquivalenceTolerance &&
           radii_equal;
  }
  if (const auto* ra = a.get_if<RetentionFloor>()) {
    const auto* rb = b.get_if<RetentionFloor>();
    return ra->metric == rb->metric && std::abs(ra->floor - rb->floor) <= kEquivalenceTolerance;
  }
  return goals_bientail(a.get_if<LogicalCore>()->goal, b.get_if<LogicalCore>()->goal, background);
}

}  // namespace gml
