#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gml/errors.hpp"

namespace gml {

/// Drift parameters of the one-step recurrence
///   W_{t+1} <= (1 - alpha) W_t + delta + beta d_t.
struct DriftParams {
  double alpha;
  double delta;
  double beta;

  DriftParams(double a, double d, double b) : alpha(a), delta(d), beta(b) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParams("alpha must lie in (0,1]");
    if (!(delta >= 0.0)) throw InvalidParams("delta must be nonnegative");
    if (!(beta >= 0.0)) throw InvalidParams("beta must be nonnegative");
  }
};

/// Discrepancy values W_0..W_n together with the n per-step transition costs.
struct TrajectoryRecord {
  std::vector<double> w_values;
  std::vector<double> costs;
  std::optional<std::uint64_t> seed;

  void validate() const;
};

/// Closed-form finite-horizon bound on E[W_n]:
///   (1-a)^n W_0 + delta/a + beta * sum_k (1-a)^{n-1-k} d_k,
/// with the n = 0 convention that the bound is W_0 itself.
double theorem_bound(const DriftParams& p, double w0, const std::vector<double>& costs);

struct UniformlyBounded {
  double d_bar;
};
struct Vanishing {};
struct VanishingAndNoiseless {};
using CostProfile = std::variant<UniformlyBounded, Vanishing, VanishingAndNoiseless>;

struct AsymptoticLimit {
  double value;  // limsup bound; exact limit for the noiseless vanishing profile
  bool exact;
};

/// Long-run classification: (delta + beta*d_bar)/alpha for uniformly bounded
/// costs, delta/alpha for vanishing costs, exact limit 0 when additionally
/// delta = 0. Throws InconsistentProfile for the noiseless profile with
/// delta > 0.
AsymptoticLimit asymptotic_class(const DriftParams& p, const CostProfile& profile);

struct DriftReport {
  std::vector<std::size_t> violations;  // indices t where the per-step recurrence fails
  bool final_bound_ok = false;
  double bound = 0.0;
  double final_w = 0.0;

  bool passed() const { return violations.empty() && final_bound_ok; }
};

/// Pathwise verification of the drift recurrence on a deterministic
/// trajectory, plus the final closed-form bound check.
DriftReport verify_drift(const DriftParams& p, const TrajectoryRecord& traj,
                         double rel_tolerance = 1e-9);

}  // namespace gml
