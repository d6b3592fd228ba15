#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "gml/scenario.hpp"

using namespace gml;

namespace {

const std::string kWitnessText =
    "[system]\n"
    "label=witness\n"
    "cost_mode=declared\n"
    "horizon=40\n"
    "initial=1.5\n"
    "start=r0\n"
    "seed=1\n"
    "[regimes]\n"
    "id=r0 dim=1 anchor=0 radius=10 mu=0 alpha=0.5\n"
    "id=r1 dim=1 anchor=0 radius=10 mu=2 alpha=0.5\n"
    "[arrows]\n"
    "id=a01 from=r0 to=r1 map=identity cost=12\n"
    "[schedule]\n"
    "20 a01\n"
    "[drift]\n"
    "alpha=0.25\n"
    "delta=0\n"
    "beta=1\n";

const std::string kTerminatingText =
    "[system]\n"
    "label=terminating\n"
    "cost_mode=declared\n"
    "horizon=10\n"
    "initial=1.5\n"
    "start=r0\n"
    "seed=1\n"
    "[regimes]\n"
    "id=r0 dim=1 anchor=0 radius=1 design=1 target=0\n"
    "id=r1 dim=1 anchor=0 radius=1 design=1 target=0\n"
    "[arrows]\n"
    "id=g01 from=r0 to=r1 map=gradient:1.9 cost=0\n"
    "[schedule]\n"
    "3 g01\n";

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string scenario_path(const std::string& name) {
  const char* dir = std::getenv("GML_SCENARIO_DIR");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("parse and format round trip") {
  Scenario s = parse_scenario_text(kWitnessText);
  CHECK(s.label == "witness");
  CHECK(s.horizon == 40);
  CHECK(s.regimes.size() == 2);
  CHECK(s.arrows.size() == 1);
  REQUIRE(s.schedule.size() == 1);
  CHECK(s.schedule.front().step == 20);
  REQUIRE(s.drift.has_value());
  CHECK(s.drift->alpha == doctest::Approx(0.25));

  Scenario again = parse_scenario_text(format_scenario(s));
  CHECK(scenario_equal(s, again));
  // canonical text is a fixed point of parse-then-format
  CHECK(format_scenario(again) == format_scenario(s));
}

TEST_CASE("shipped scenario files parse") {
  for (const char* name :
       {"two_regime_witness.scn", "toy_regression_termination.scn"}) {
    Scenario s = load_scenario(scenario_path(name));
    CHECK(validate_scenario(s).empty());
    CHECK(scenario_equal(s, parse_scenario_text(format_scenario(s))));
  }
}

TEST_CASE("malformed input reports line-anchored issues") {
  CHECK_THROWS_AS(parse_scenario_text("[regimes]\nid=r0 dim=banana\n"), InvalidScenario);
  CHECK_THROWS_AS(parse_scenario_text("[arrows]\nid=a from=r0 tof=r1\n"), InvalidScenario);
  CHECK_THROWS_AS(parse_scenario_text("[schedule]\nnot-a-step a01\n"), InvalidScenario);
  CHECK_THROWS_AS(parse_scenario_text("what even is this\n"), InvalidScenario);

  try {
    parse_scenario_text("[regimes]\nid=r0 dim=banana\n");
    FAIL("expected InvalidScenario");
  } catch (const InvalidScenario& e) {
    REQUIRE(!e.issues.empty());
    CHECK(e.issues.front().find("line 2") != std::string::npos);
  }
}

TEST_CASE("validation catches semantic issues the grammar allows") {
  Scenario s = parse_scenario_text(kWitnessText);

  Scenario missing_core = s;
  missing_core.regimes[0].floor.reset();
  missing_core.regimes[0].core_declared = false;
  CHECK(!validate_scenario(missing_core).empty());

  Scenario bad_arrow = s;
  bad_arrow.arrows[0].target = "r9";
  CHECK(!validate_scenario(bad_arrow).empty());

  Scenario bad_schedule = s;
  bad_schedule.schedule[0].step = 100;  // beyond horizon
  CHECK(!validate_scenario(bad_schedule).empty());

  Scenario bad_start = s;
  bad_start.start = "nope";
  CHECK(!validate_scenario(bad_start).empty());

  CHECK_THROWS_AS(run_scenario(missing_core), InvalidScenario);
}

TEST_CASE("completed run") {
  RunReport r = run_scenario(parse_scenario_text(kWitnessText));
  CHECK(r.completed);
  CHECK(!r.terminated_at.has_value());
  CHECK(r.steps.size() == 41);  // rows 0..horizon
  CHECK(r.steps.front().regime == "r0");
  CHECK(r.steps.back().regime == "r1");
  REQUIRE(r.certificates.size() == 1);
  CHECK(r.certificates.front().first == 20);
  CHECK(r.certificates.front().second.admissible);
  REQUIRE(r.drift.has_value());
  CHECK(r.drift->passed());
}

TEST_CASE("terminated run stops at the failing switch") {
  RunReport r = run_scenario(parse_scenario_text(kTerminatingText));
  CHECK(!r.completed);
  REQUIRE(r.terminated_at.has_value());
  CHECK(*r.terminated_at == 3);
  CHECK(r.steps.size() == 4);  // rows 0..3 inclusive
  CHECK(r.steps.back().cost == std::numeric_limits<double>::infinity());
  CHECK(!r.steps.back().admissible);
  REQUIRE(!r.termination_reasons.empty());
  CHECK(r.termination_reasons.front().reason == FailureReason::ProtectedViolated);
}

TEST_CASE("runs are deterministic") {
  RunReport a = run_scenario(parse_scenario_text(kWitnessText));
  RunReport b = run_scenario(parse_scenario_text(kWitnessText));
  CHECK(emit_report(a, ReportFormat::Json) == emit_report(b, ReportFormat::Json));
  CHECK(emit_report(a, ReportFormat::Csv) == emit_report(b, ReportFormat::Csv));
}

TEST_CASE("csv row counts") {
  RunReport empty;
  CHECK(count_lines(emit_report(empty, ReportFormat::Csv)) == 1);  // header only

  RunReport done = run_scenario(parse_scenario_text(kWitnessText));
  CHECK(count_lines(emit_report(done, ReportFormat::Csv)) == 42);

  RunReport cut = run_scenario(parse_scenario_text(kTerminatingText));
  CHECK(count_lines(emit_report(cut, ReportFormat::Csv)) == 5);

  std::istringstream header(emit_report(empty, ReportFormat::Csv));
  std::string line;
  std::getline(header, line);
  CHECK(line == "t,regime,w,cost,admissible");
}

TEST_CASE("termination soundness: the recorded step really is inadmissible") {
  Scenario s = parse_scenario_text(kTerminatingText);
  RunReport r = run_scenario(s);
  REQUIRE(r.terminated_at.has_value());
  REQUIRE(r.certificates.size() == 1);
  CHECK(r.certificates.front().first == *r.terminated_at);
  CHECK(!r.certificates.front().second.admissible);

  GmlSystem sys = build_system(s);
  Certificate direct = certify(sys, *sys.graph.find_arrow("g01"),
                               r.steps[*r.terminated_at].state, s.initial_memory);
  CHECK(!direct.admissible);
}

TEST_CASE("switch with an equal dynamics anchor costs nothing extra") {
  std::string text = kWitnessText;
  auto pos = text.find("mu=2");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "mu=0");
  RunReport r = run_scenario(parse_scenario_text(text));
  CHECK(r.completed);
  // declared cost still applies at the switch row
  CHECK(r.steps[20].cost == doctest::Approx(12.0));
}
