#include "gml/witness.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gml {

Vec contractive_step(const Vec& s, const AnchoredRegime& r) {
  if (s.size() != r.anchor.size()) {
    throw DimensionMismatch("state dimension " + std::to_string(s.size()) +
                            " does not match anchor dimension " + std::to_string(r.anchor.size()));
  }
  if (!(r.alpha > 0.0 && r.alpha <= 1.0)) throw InvalidAlpha("alpha must lie in (0,1]");
  return r.anchor + std::sqrt(1.0 - r.alpha) * (s - r.anchor);
}

EpsilonRange epsilon_range(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidAlpha("alpha must lie in (0,1]");
  if (alpha == 1.0) return {0.0, std::numeric_limits<double>::infinity(), true};
  return {0.0, alpha / (1.0 - alpha), false};
}

double default_epsilon(double alpha) {
  auto range = epsilon_range(alpha);
  return range.unbounded ? 1.0 : 0.5 * range.upper;
}

double transport_overhead(double eps, const Vec& mu_src, const Vec& mu_dst) {
  if (!(eps > 0.0)) throw InvalidParams("eps must be positive");
  if (mu_src.size() != mu_dst.size()) throw DimensionMismatch("anchor dimensions differ");
  return (1.0 + 1.0 / eps) * (mu_src - mu_dst).squaredNorm();
}

double effective_contraction(double alpha) {
  return 1.0 - (1.0 + default_epsilon(alpha)) * (1.0 - alpha);
}

WitnessRun simulate_witness(const std::vector<AnchoredRegime>& regimes,
                            const std::vector<std::size_t>& switch_schedule, const Vec& s0,
                            std::size_t steps) {
  if (regimes.empty()) throw InvalidParams("need at least one regime");
  if (switch_schedule.size() + 1 > regimes.size()) {
    throw InvalidParams("more switches than regimes to switch into");
  }
  for (std::size_t i = 0; i < switch_schedule.size(); ++i) {
    if (switch_schedule[i] >= steps) throw InvalidParams("switch index beyond horizon");
    if (i > 0 && switch_schedule[i] <= switch_schedule[i - 1]) {
      throw InvalidParams("switch schedule must be strictly increasing");
    }
  }
  for (const auto& r : regimes) {
    if (r.anchor.size() != s0.size()) throw DimensionMismatch("regime anchors must share dimension");
  }

  WitnessRun run;
  run.effective_alpha = 1.0;
  for (const auto& r : regimes) {
    run.effective_alpha = std::min(run.effective_alpha, effective_contraction(r.alpha));
  }

  std::size_t current = 0;
  std::size_t next_switch = 0;
  Vec s = s0;
  run.trajectory.w_values.push_back((s - regimes[current].anchor).squaredNorm());
  for (std::size_t t = 0; t < steps; ++t) {
    s = contractive_step(s, regimes[current]);
    double cost = 0.0;
    if (next_switch < switch_schedule.size() && switch_schedule[next_switch] == t) {
      const auto& departing = regimes[current];
      ++current;
      ++next_switch;
      cost = transport_overhead(default_epsilon(departing.alpha), departing.anchor,
                                regimes[current].anchor);
    }
    run.trajectory.costs.push_back(cost);
    run.trajectory.w_values.push_back((s - regimes[current].anchor).squaredNorm());
  }
  return run;
}

Vec gradient_transport(const Vec& w, const RegressionRegime& r) {
  if (r.design.cols() != w.size() || r.design.rows() != r.target.size()) {
    throw DimensionMismatch("regression design/target dimensions inconsistent with parameter");
  }
  return w - r.step * r.design.transpose() * (r.design * w - r.target);
}

Vec least_squares_minimizer(const RegressionRegime& r) {
  Mat gram = r.design.transpose() * r.design;
  Eigen::FullPivLU<Mat> lu(gram);
  if (!lu.isInvertible()) throw SingularDesign("X^T X is singular; minimizer undefined");
  return lu.solve(r.design.transpose() * r.target);
}

Certificate toy_admissible(const Vec& w, const RegressionRegime& r,
                           const RegressionRegime* target) {
  Vec transported = gradient_transport(w, r);
  if (transported.size() != r.anchor.size()) {
    throw DimensionMismatch("anchor dimension inconsistent with parameter");
  }

  Certificate cert;
  cert.transported_state = transported;
  cert.transported_memory = MemoryState{};
  cert.admissible = (transported - r.anchor).norm() <= r.radius;
  if (!cert.admissible) {
    cert.reasons.push_back({FailureReason::ProtectedViolated, {},
                            "transported parameter leaves the trust region"});
    cert.cost = Cost::infinite();
    return cert;
  }
  if (target) {
    Vec w_src = least_squares_minimizer(r);
    Vec w_dst = least_squares_minimizer(*target);
    cert.cost = Cost::finite(r.cost_scale * (w_dst - w_src).squaredNorm());
  } else {
    cert.cost = Cost::finite(0.0);
  }
  return cert;
}

ObstructionReport scalarization_obstruction(double utility_slope, double boundary, double penalty,
                                            const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidParams("candidate grid must be nonempty");
  if (!(utility_slope > 0.0)) throw InvalidParams("utility slope must be positive");
  if (!(penalty > 0.0)) throw InvalidParams("penalty must be positive");

  ObstructionReport report{};
  report.penalty_value = -std::numeric_limits<double>::infinity();
  report.gated_value = -std::numeric_limits<double>::infinity();

  for (double s : grid) {
    const bool violates = s > boundary;
    const double penalized = utility_slope * s - (violates ? penalty : 0.0);
    if (penalized > report.penalty_value) {
      report.penalty_value = penalized;
      report.penalty_maximizer = s;
    }
    if (!violates && utility_slope * s > report.gated_value) {
      report.gated_value = utility_slope * s;
      report.gated_maximizer = s;
    }
  }
  report.divergence = report.penalty_maximizer > boundary;
  return report;
}

double covering_bound(const CapacityCheck& c) {
  if (!(c.resolution > 0.0)) throw InvalidResolution("resolution must be positive");
  if (c.dimension < 0) throw InvalidParams("dimension must be nonnegative");
  if (!(c.diameter > 0.0)) throw InvalidParams("diameter must be positive");
  if (!(c.transport_regularity > 0.0)) throw InvalidParams("L_tau must be positive");
  const double transported_resolution = c.resolution / c.transport_regularity;
  return c.dimension * std::log(1.0 + 2.0 * c.diameter / transported_resolution) + c.innovation;
}

}  // namespace gml
