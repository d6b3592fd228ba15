#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gml/morphism.hpp"
#include "gml/scenario.hpp"
#include "gml/witness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kViolation = 2;

std::vector<double> parse_doubles(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void write_out(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw gml::Error("cannot write " + out_path);
  out << payload;
}

int cmd_run(const std::string& scenario_path, const std::string& format,
            const std::string& out_path) {
  gml::Scenario scenario = gml::load_scenario(scenario_path);
  gml::RunReport report = gml::run_scenario(scenario);
  auto fmt = format == "csv" ? gml::ReportFormat::Csv : gml::ReportFormat::Json;
  write_out(gml::emit_report(report, fmt), out_path);
  if (!report.completed) return kViolation;
  if (report.drift && !report.drift->passed()) return kViolation;
  return kOk;
}

int cmd_verify_bound(const std::string& trajectory_path, double alpha, double delta, double beta) {
  std::ifstream in(trajectory_path);
  if (!in) throw gml::Error("cannot open " + trajectory_path);

  gml::TrajectoryRecord traj;
  std::vector<double> costs;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;  // runner CSV header
    }
    std::vector<std::string> cols;
    std::string col;
    std::istringstream row(line);
    while (std::getline(row, col, ',')) cols.push_back(col);
    if (cols.size() < 4) throw gml::Error("expected runner CSV columns t,regime,w,cost,...");
    traj.w_values.push_back(std::stod(cols[2]));
    costs.push_back(cols[3] == "inf" ? std::numeric_limits<double>::infinity()
                                     : std::stod(cols[3]));
  }
  if (traj.w_values.empty()) throw gml::Error("trajectory file has no rows");
  costs.pop_back();  // last row carries no onward step
  traj.costs = std::move(costs);

  gml::DriftReport report = gml::verify_drift(gml::DriftParams(alpha, delta, beta), traj);
  std::cout << "steps=" << traj.costs.size() << " final_w=" << report.final_w
            << " bound=" << report.bound << " violations=" << report.violations.size() << "\n";
  for (auto t : report.violations) std::cout << "violation at step " << t << "\n";
  return report.passed() ? kOk : kViolation;
}

int cmd_entail(const std::string& theory_path, const std::string& goal_text) {
  std::ifstream in(theory_path);
  if (!in) throw gml::Error("cannot open " + theory_path);
  gml::symbolic::Theory theory = gml::symbolic::parse_theory(in);
  gml::symbolic::Goal goal = gml::symbolic::parse_goal(goal_text);
  bool ok = gml::symbolic::entails(theory, goal);
  std::cout << (ok ? "entailed" : "not entailed") << "\n";
  return ok ? kOk : kViolation;
}

int cmd_collapse(const std::string& scenario_path) {
  gml::Scenario scenario = gml::load_scenario(scenario_path);
  if (auto issues = gml::validate_scenario(scenario); !issues.empty()) {
    throw gml::InvalidScenario("scenario validation failed", std::move(issues));
  }
  auto [tuple, report] = gml::mitchell_collapse(gml::build_system(scenario));

  nlohmann::ordered_json doc;
  doc["tuple"] = {{"experience", tuple.experience}, {"task", tuple.task}};
  doc["degeneration"] = report.degeneration;
  doc["reducibility"] = report.reducibility;
  doc["classification"] = report.faithful ? "FAITHFUL" : "LOSSY";
  doc["obstructions"] = report.obstructions;
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

int cmd_witness(const std::string& alphas_text, const std::string& anchors_text,
                std::size_t steps) {
  std::vector<double> alphas = parse_doubles(alphas_text);
  std::vector<gml::AnchoredRegime> regimes;
  std::string block;
  std::istringstream anchors(anchors_text);
  std::size_t i = 0;
  while (std::getline(anchors, block, ';')) {
    std::vector<double> comps = parse_doubles(block);
    gml::Vec anchor = Eigen::Map<gml::Vec>(comps.data(), static_cast<Eigen::Index>(comps.size()));
    double alpha = i < alphas.size() ? alphas[i] : alphas.back();
    regimes.push_back({"r" + std::to_string(i), anchor, alpha});
    ++i;
  }
  if (regimes.empty()) throw gml::Error("need at least one anchor");

  std::vector<std::size_t> schedule;
  for (std::size_t k = 1; k < regimes.size(); ++k) {
    schedule.push_back(k * steps / regimes.size());
  }
  gml::Vec s0 = regimes.front().anchor.array() + 1.0;
  gml::WitnessRun run = gml::simulate_witness(regimes, schedule, s0, steps);
  gml::DriftReport drift = gml::verify_drift(gml::DriftParams(run.effective_alpha, 0.0, 1.0),
                                             run.trajectory);
  std::cout << "effective_alpha=" << run.effective_alpha
            << " final_w=" << run.trajectory.w_values.back()
            << " violations=" << drift.violations.size()
            << " bound_ok=" << (drift.final_bound_ok ? 1 : 0) << "\n";
  return drift.passed() ? kOk : kViolation;
}

int cmd_pac(const std::string& deltas_text, std::size_t trials, std::uint64_t seed) {
  std::vector<double> deltas = parse_doubles(deltas_text);
  gml::PacBounds bounds = gml::pac_chain_bound(deltas);
  std::cout << "product_bound=" << bounds.product_bound << " union_bound=" << bounds.union_bound;
  if (trials > 0) {
    std::cout << " simulated=" << gml::pac_chain_simulate(deltas, trials, seed);
  }
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-variation learning kernel"};
  app.require_subcommand(1);

  std::string scenario_path, format = "json", out_path;
  auto* run = app.add_subcommand("run", "Execute a scenario through the admissibility gate");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", out_path, "output path (default stdout)");

  std::string trajectory_path;
  double alpha = 0.5, delta = 0.0, beta = 1.0;
  auto* verify = app.add_subcommand("verify-bound", "Check the drift recurrence on a run CSV");
  verify->add_option("trajectory", trajectory_path, "runner CSV file")->required();
  verify->add_option("--alpha", alpha)->required();
  verify->add_option("--delta", delta)->required();
  verify->add_option("--beta", beta)->required();

  std::string theory_path, goal_text;
  auto* entail = app.add_subcommand("entail", "Forward-chaining entailment check");
  entail->add_option("theory", theory_path, "clause file")->required();
  entail->add_option("--goal", goal_text, "goal atoms, e.g. \"a b\"")->required();

  std::string collapse_path;
  auto* collapse = app.add_subcommand("collapse", "One-regime collapse classification");
  collapse->add_option("scenario", collapse_path, "scenario file")->required();

  std::string alphas_text = "0.5", anchors_text = "0;2";
  std::size_t steps = 200;
  auto* witness = app.add_subcommand("witness", "Built-in contraction simulation");
  witness->add_option("--alpha", alphas_text, "per-regime rates, comma separated");
  witness->add_option("--anchors", anchors_text, "anchors, ';' between regimes");
  witness->add_option("--steps", steps);

  std::string deltas_text;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  auto* pac = app.add_subcommand("pac", "Chain admissibility bounds");
  pac->add_option("--deltas", deltas_text, "per-segment failure rates")->required();
  pac->add_option("--trials", trials, "Monte-Carlo trials (0 disables)");
  pac->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, format, out_path);
    if (verify->parsed()) return cmd_verify_bound(trajectory_path, alpha, delta, beta);
    if (entail->parsed()) return cmd_entail(theory_path, goal_text);
    if (collapse->parsed()) return cmd_collapse(collapse_path);
    if (witness->parsed()) return cmd_witness(alphas_text, anchors_text, steps);
    if (pac->parsed()) return cmd_pac(deltas_text, trials, seed);
  } catch (const gml::InvalidScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
