#include "gml/stability.hpp"

#include <cmath>
#include <string>

namespace gml {

void TrajectoryRecord::validate() const {
  if (w_values.empty()) throw InvalidParams("trajectory needs at least W_0");
  if (costs.size() + 1 != w_values.size()) {
    throw InvalidParams("expected " + std::to_string(w_values.size() - 1) + " costs, got " +
                        std::to_string(costs.size()));
  }
  for (double w : w_values) {
    if (!(w >= 0.0)) throw InvalidParams("discrepancy values must be nonnegative");
  }
  for (double d : costs) {
    if (!(d >= 0.0)) throw InvalidParams("transition costs must be nonnegative");
  }
}

double theorem_bound(const DriftParams& p, double w0, const std::vector<double>& costs) {
  if (!(w0 >= 0.0)) throw InvalidParams("W_0 must be nonnegative");
  const std::size_t n = costs.size();
  if (n == 0) return w0;

  const double q = 1.0 - p.alpha;
  double transport = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    transport += std::pow(q, static_cast<double>(n - 1 - k)) * costs[k];
  }
  return std::pow(q, static_cast<double>(n)) * w0 + p.delta / p.alpha + p.beta * transport;
}

AsymptoticLimit asymptotic_class(const DriftParams& p, const CostProfile& profile) {
  struct Classifier {
    const DriftParams& p;

    AsymptoticLimit operator()(const UniformlyBounded& u) const {
      if (!(u.d_bar >= 0.0)) throw InvalidParams("cost ceiling must be nonnegative");
      return {(p.delta + p.beta * u.d_bar) / p.alpha, false};
    }
    AsymptoticLimit operator()(const Vanishing&) const { return {p.delta / p.alpha, false}; }
    AsymptoticLimit operator()(const VanishingAndNoiseless&) const {
      if (p.delta != 0.0) {
        throw InconsistentProfile("noiseless profile requires delta = 0");
      }
      return {0.0, true};
    }
  };
  return std::visit(Classifier{p}, profile);
}

DriftReport verify_drift(const DriftParams& p, const TrajectoryRecord& traj,
                         double rel_tolerance) {
  traj.validate();
  DriftReport report;
  const double q = 1.0 - p.alpha;
  for (std::size_t t = 0; t + 1 < traj.w_values.size(); ++t) {
    const double rhs = q * traj.w_values[t] + p.delta + p.beta * traj.costs[t];
    const double tol = rel_tolerance * (1.0 + std::abs(rhs));
    if (traj.w_values[t + 1] > rhs + tol) report.violations.push_back(t);
  }
  report.final_w = traj.w_values.back();
  report.bound = theorem_bound(p, traj.w_values.front(), traj.costs);
  report.final_bound_ok =
      report.final_w <= report.bound + rel_tolerance * (1.0 + std::abs(report.bound));
  return report;
}

}  // namespace gml
