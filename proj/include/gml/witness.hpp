#pragma once

#include <optional>
#include <vector>

#include "gml/admissibility.hpp"
#include "gml/stability.hpp"

namespace gml {

/// A regime with a stationary anchor and a contraction rate toward it.
struct AnchoredRegime {
  RegimeId regime;
  Vec anchor;
  double alpha;  // contraction rate in (0,1]
};

/// One exact contraction step: out = mu + sqrt(1-alpha) (s - mu), so that
/// ||out - mu||^2 = (1-alpha) ||s - mu||^2.
Vec contractive_step(const Vec& s, const AnchoredRegime& r);

/// The open interval (0, alpha/(1-alpha)) of valid splitting constants;
/// unbounded above when alpha = 1. Every interior eps satisfies
/// (1+eps)(1-alpha) < 1.
struct EpsilonRange {
  double lower;  // always 0
  double upper;  // ignored when unbounded
  bool unbounded;

  bool contains(double eps) const { return eps > lower && (unbounded || eps < upper); }
};

EpsilonRange epsilon_range(double alpha);

/// Splitting constant used at regime switches: the midpoint of
/// epsilon_range(alpha), with alpha = 1 mapped to eps = 1.
double default_epsilon(double alpha);

/// Transport overhead (1 + 1/eps) ||mu_src - mu_dst||^2 from the Young split.
double transport_overhead(double eps, const Vec& mu_src, const Vec& mu_dst);

/// Effective contraction rate 1 - (1+eps)(1-alpha) under default_epsilon.
double effective_contraction(double alpha);

struct WitnessRun {
  TrajectoryRecord trajectory;
  /// Drift parameters every step of the trajectory satisfies (delta = 0,
  /// beta = 1, alpha = weakest effective contraction across the regimes).
  double effective_alpha;
};

/// Simulate contraction through a regime sequence. The schedule lists step
/// indices at which the run advances to the next regime; the switch cost is
/// the transport overhead with the departing regime's default epsilon, and
/// W_t is measured against the current regime's anchor.
WitnessRun simulate_witness(const std::vector<AnchoredRegime>& regimes,
                            const std::vector<std::size_t>& switch_schedule, const Vec& s0,
                            std::size_t steps);

/// Two-regime linear regression instance with a trust-region floor.
struct RegressionRegime {
  Mat design;
  Vec target;
  double step;       // gradient step size
  Vec anchor;        // protected anchor w-bar
  double radius;     // trust-region radius rho
  double cost_scale; // c0 in the anchor-shift regime cost
};

/// One gradient step on the regression loss: w - step * X^T (X w - y).
Vec gradient_transport(const Vec& w, const RegressionRegime& r);

/// Least-squares minimizer by normal-equation solve.
/// Throws SingularDesign when X^T X is not invertible.
Vec least_squares_minimizer(const RegressionRegime& r);

/// Admissible iff the transported parameter stays inside the trust region;
/// with a target regime, cost = c0 ||w1* - w0*||^2 over the two minimizers.
Certificate toy_admissible(const Vec& w, const RegressionRegime& r,
                           const RegressionRegime* target = nullptr);

/// Grid search contrasting the penalty-maximizing candidate of
/// P(s) = u s - lambda 1{s > b} with the maximizer gated to s <= b.
struct ObstructionReport {
  double penalty_maximizer;
  double penalty_value;
  std::optional<double> gated_maximizer;  // empty when no candidate satisfies s <= b
  double gated_value;
  bool divergence;  // penalty maximizer crosses the protected boundary
};

ObstructionReport scalarization_obstruction(double utility_slope, double boundary, double penalty,
                                            const std::vector<double>& grid);

/// Inputs of the metric-entropy admissibility check.
struct CapacityCheck {
  int dimension;
  double diameter;
  double resolution;
  double transport_regularity = 1.0;  // L_tau
  double innovation = 0.0;            // C_new
};

/// d log(1 + 2 diam / (eps / L_tau)) + C_new. Throws InvalidResolution for a
/// nonpositive resolution.
double covering_bound(const CapacityCheck& c);

}  // namespace gml
