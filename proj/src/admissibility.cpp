#include "gml/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gml {

std::string to_string(FailureReason r) {
  switch (r) {
    case FailureReason::IllTyped: return "IllTyped";
    case FailureReason::TransportUnrealizable: return "TransportUnrealizable";
    case FailureReason::EvaluatorIncompatible: return "EvaluatorIncompatible";
    case FailureReason::ProtectedViolated: return "ProtectedViolated";
    case FailureReason::ComparisonUndefined: return "ComparisonUndefined";
    case FailureReason::CompositionIneligible: return "CompositionIneligible";
  }
  return "?";
}

bool Certificate::has_reason(FailureReason r) const {
  return std::any_of(reasons.begin(), reasons.end(),
                     [&](const ReasonEntry& e) { return e.reason == r; });
}

namespace {

bool state_map_well_typed(const Transition& t, const Regime& src, const Regime& dst,
                          std::string& detail) {
  struct Checker {
    const Regime& src;
    const Regime& dst;
    std::string& detail;

    bool operator()(const IdentityMap&) const {
      if (src.state_dim != dst.state_dim) {
        detail = "identity transport between different state dimensions";
        return false;
      }
      return true;
    }
    bool operator()(const LinearMap& m) const {
      if (m.matrix.cols() != src.state_dim || m.matrix.rows() != dst.state_dim ||
          m.offset.size() != dst.state_dim) {
        detail = "linear map dimensions incompatible with regime carriers";
        return false;
      }
      return true;
    }
    bool operator()(const GradientStepMap& m) const {
      if (src.state_dim != dst.state_dim) {
        detail = "gradient-step transport requires equal state dimensions";
        return false;
      }
      if (!(m.step > 0.0)) {
        detail = "gradient step must be positive";
        return false;
      }
      return true;
    }
    bool operator()(const SyntacticInclusionMap&) const {
      if (src.state_dim != dst.state_dim) {
        detail = "syntactic inclusion requires equal state dimensions";
        return false;
      }
      return true;
    }
    bool operator()(const std::vector<StateMap>&) const {
      return true;  // composite maps are typed by application
    }
  };
  return std::visit(Checker{src, dst, detail}, t.state_map.kind);
}

Cost assign_cost(const GmlSystem& system, const Transition& t, const Regime& src,
                 const Regime& dst) {
  struct Assigner {
    const Transition& t;
    const Regime& src;
    const Regime& dst;

    Cost operator()(const DeclaredCost&) const { return t.structural_cost; }
    Cost operator()(const AnchorShiftCost& m) const {
      const auto* a = src.evaluator.protected_core.get_if<ScalarFloor>();
      const auto* b = dst.evaluator.protected_core.get_if<ScalarFloor>();
      if (!a || !b || a->anchor.size() != b->anchor.size()) {
        throw InvalidConfig("anchor-shift cost needs scalar-floor cores of equal dimension");
      }
      return Cost::finite(m.c0 * (b->anchor - a->anchor).squaredNorm());
    }
    Cost operator()(const EntailmentGateCost&) const { return Cost::finite(1.0); }
  };
  return std::visit(Assigner{t, src, dst}, system.admissibility.cost_mode);
}

}  // namespace

Certificate certify(const GmlSystem& system, const Transition& t, const Vec& state,
                    const MemoryState& memory) {
  const Regime& src = system.graph.regime(t.source);
  const Regime& dst = system.graph.regime(t.target);

  Certificate cert;

  // (i) typing on the local components
  std::string detail;
  if (state.size() != src.state_dim) {
    cert.reasons.push_back({FailureReason::IllTyped, {},
                            "state dimension " + std::to_string(state.size()) +
                                " does not match regime dimension " +
                                std::to_string(src.state_dim)});
  } else if (!state_map_well_typed(t, src, dst, detail)) {
    cert.reasons.push_back({FailureReason::IllTyped, {}, detail});
  }

  // (ii) transport realizability on (state, memory)
  if (cert.reasons.empty()) {
    try {
      Vec transported = apply_state_map(t, src, state);
      if (transported.size() != dst.state_dim) {
        cert.reasons.push_back({FailureReason::IllTyped, {},
                                "transported state dimension does not match target regime"});
      } else {
        cert.transported_state = std::move(transported);
        cert.transported_memory = apply_memory_map(t.memory_map, memory);
      }
    } catch (const Error& e) {
      cert.reasons.push_back({FailureReason::TransportUnrealizable, {}, e.what()});
    }
  }

  // (iii) monotone comparison transport
  if (!(t.gauge.scale > 0.0)) {
    cert.reasons.push_back({FailureReason::EvaluatorIncompatible, {}, "gauge is not monotone"});
  }

  // (iv) protected preservation on the transported pair, plus equivalence of
  // the source and target cores
  if (cert.transported_state) {
    const symbolic::Theory* background =
        cert.transported_memory->theory ? &*cert.transported_memory->theory : nullptr;
    try {
      if (!protected_equivalent(src.evaluator.protected_core, dst.evaluator.protected_core,
                                background)) {
        cert.reasons.push_back(
            {FailureReason::ProtectedViolated, {}, "source and target cores are not equivalent"});
      } else if (!evaluate_core(dst.evaluator.protected_core, *cert.transported_state,
                                *cert.transported_memory)) {
        cert.reasons.push_back({FailureReason::ProtectedViolated, {},
                                "transported state violates the target protected core"});
      }
    } catch (const Error& e) {
      cert.reasons.push_back({FailureReason::ProtectedViolated, {}, e.what()});
    }
  }

  // (v) cross-regime comparison and (vi) composition eligibility always hold
  // for primitive arrows with positive-affine gauges.

  cert.admissible = cert.reasons.empty();
  cert.cost = cert.admissible ? assign_cost(system, t, src, dst) : Cost::infinite();
  return cert;
}

Certificate chain_certify(const GmlSystem& system, const std::vector<Transition>& path,
                          const Vec& state, const MemoryState& memory) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i].target != path[i + 1].source) {
      throw NonComposable("path breaks between segments " + std::to_string(i) + " and " +
                          std::to_string(i + 1));
    }
  }

  Certificate chain;
  chain.admissible = true;
  chain.cost = Cost::finite(0.0);
  Vec s = state;
  MemoryState m = memory;

  for (std::size_t i = 0; i < path.size(); ++i) {
    Certificate seg = certify(system, path[i], s, m);
    chain.cost += seg.cost;
    for (auto reason : seg.reasons) {
      reason.segment = i;
      chain.reasons.push_back(std::move(reason));
    }
    if (!seg.admissible) {
      chain.admissible = false;
      break;
    }
    s = *seg.transported_state;
    m = *seg.transported_memory;
  }

  if (chain.admissible) {
    chain.transported_state = s;
    chain.transported_memory = m;
  }
  return chain;
}

PacBounds pac_chain_bound(const std::vector<double>& deltas) {
  double product = 1.0;
  double sum = 0.0;
  for (double d : deltas) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw OutOfRangeDelta("delta must lie in [0,1], got " + std::to_string(d));
    }
    product *= 1.0 - d;
    sum += d;
  }
  return {product, std::max(0.0, 1.0 - sum)};
}

double pac_chain_simulate(const std::vector<double>& deltas, std::size_t trials,
                          std::uint64_t seed) {
  pac_chain_bound(deltas);  // validate
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t successes = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    bool ok = true;
    for (double d : deltas) {
      if (unit(rng) < d) {
        ok = false;
        break;
      }
    }
    if (ok) ++successes;
  }
  return trials == 0 ? 1.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

std::pair<Certificate, Certificate> retention_gate_demo(double proxy_gain,
                                                        const CandidateUpdate& candidate_a,
                                                        const CandidateUpdate& candidate_b,
                                                        double floor) {
  if (candidate_a.proxy_gain != proxy_gain || candidate_b.proxy_gain != proxy_gain) {
    throw InvalidParams("retention gate demo requires identical proxy gains");
  }
  auto gate = [&](const CandidateUpdate& c) {
    Certificate cert;
    cert.admissible = c.retained_competence >= floor;
    if (cert.admissible) {
      cert.cost = Cost::finite(0.0);
    } else {
      cert.cost = Cost::infinite();
      cert.reasons.push_back({FailureReason::ProtectedViolated, {},
                              "retained competence " + std::to_string(c.retained_competence) +
                                  " below floor " + std::to_string(floor)});
    }
    return cert;
  };
  return {gate(candidate_a), gate(candidate_b)};
}

}  // namespace gml
