#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gml/admissibility.hpp"
#include "gml/stability.hpp"

namespace gml {

/// One regime line of a scenario file. Exactly one protected core form must
/// be given (or `core=none`, which parses but fails validation).
struct ScenarioRegime {
  RegimeId id;
  Eigen::Index dim = 1;
  std::optional<ScalarFloor> floor;
  std::optional<RetentionFloor> retention;
  bool core_declared = true;
  std::optional<Vec> mu;        // dynamics anchor when it differs from the core anchor
  std::optional<double> alpha;  // within-regime contraction toward the anchor
  std::optional<double> step;   // within-regime gradient step on the loss below
  std::optional<Mat> design;
  std::optional<Vec> target;
};

struct ScenarioArrow {
  std::string id;
  RegimeId source;
  RegimeId target;
  StateMap state_map;
  Gauge gauge;
  Cost cost = Cost::finite(0.0);
};

struct ScheduledSwitch {
  std::size_t step;
  std::string arrow;
};

struct Scenario {
  std::string label;
  AdmissibilityConfig admissibility;
  std::size_t horizon = 0;
  Vec initial;
  RegimeId start;  // defaults to the first regime listed
  std::uint64_t seed = 0;
  std::vector<ScenarioRegime> regimes;
  std::vector<ScenarioArrow> arrows;
  std::vector<ScheduledSwitch> schedule;
  std::optional<DriftParams> drift;
  MemoryState initial_memory;
};

/// Parse the sectioned text format ([system], [regimes], [arrows], [schedule],
/// [drift], [memory]); grammar documented in the repository README. Throws
/// InvalidScenario on malformed input.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical serialization; parse_scenario_text(format_scenario(s)) yields an
/// equal scenario.
std::string format_scenario(const Scenario& s);

bool scenario_equal(const Scenario& a, const Scenario& b);

/// Semantic checks beyond the grammar; empty result means runnable.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Build the regime graph and cost mode described by the scenario.
GmlSystem build_system(const Scenario& s);

struct StepRecord {
  std::size_t t;
  RegimeId regime;
  Vec state;
  double w;         // squared distance to the regime anchor (0 without one)
  double cost;      // transition cost incurred at this step, +inf on the failing step
  bool admissible;  // certificate outcome when a transition was attempted
};

struct RunReport {
  std::vector<StepRecord> steps;
  bool completed = false;
  std::optional<std::size_t> terminated_at;  // first inadmissible step
  std::vector<ReasonEntry> termination_reasons;
  std::vector<std::pair<std::size_t, Certificate>> certificates;  // scheduled steps only
  std::optional<DriftReport> drift;
  std::uint64_t seed = 0;
};

/// Execute the scenario step by step through the certificate gate. Scheduled
/// transitions that certify inadmissible terminate the run at that step.
/// Throws InvalidScenario when validate_scenario reports issues.
RunReport run_scenario(const Scenario& s);

enum class ReportFormat { Json, Csv };

/// Deterministic serialization. CSV is the `t,regime,w,cost,admissible`
/// table; JSON additionally carries the certificates and drift check.
std::string emit_report(const RunReport& r, ReportFormat format);

}  // namespace gml
