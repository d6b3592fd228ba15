#include "gml/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <json.hpp>
#include <sstream>

namespace gml {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct LineParser {
  std::vector<std::string>& issues;
  std::string where;

  bool number(const std::string& text, double& out) {
    if (text == "inf") {
      out = std::numeric_limits<double>::infinity();
      return true;
    }
    try {
      std::size_t used = 0;
      out = std::stod(text, &used);
      if (used == text.size()) return true;
    } catch (const std::exception&) {
    }
    issues.push_back(where + ": bad number '" + text + "'");
    return false;
  }

  bool vector(const std::string& text, Vec& out) {
    auto parts = split(text, ',');
    out.resize(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      double x;
      if (!number(parts[i], x)) return false;
      out[static_cast<Eigen::Index>(i)] = x;
    }
    return true;
  }

  bool matrix(const std::string& text, Mat& out) {
    auto rows = split(text, ';');
    std::vector<Vec> parsed;
    for (const auto& row : rows) {
      Vec v;
      if (!vector(row, v)) return false;
      parsed.push_back(std::move(v));
    }
    if (parsed.empty()) {
      issues.push_back(where + ": empty matrix");
      return false;
    }
    out.resize(static_cast<Eigen::Index>(parsed.size()), parsed.front().size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      if (parsed[i].size() != out.cols()) {
        issues.push_back(where + ": ragged matrix rows");
        return false;
      }
      out.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
    }
    return true;
  }
};

std::string format_vector(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

std::string format_matrix(const Mat& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    out += format_vector(m.row(i).transpose());
  }
  return out;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  std::vector<std::string> issues;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  std::optional<double> drift_alpha, drift_delta, drift_beta;

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    LineParser p{issues, "line " + std::to_string(lineno)};

    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back(p.where + ": malformed section header");
        continue;
      }
      section = line.substr(1, line.size() - 2);
      if (section != "system" && section != "regimes" && section != "arrows" &&
          section != "schedule" && section != "drift" && section != "memory") {
        issues.push_back(p.where + ": unknown section [" + section + "]");
      }
      continue;
    }

    if (section == "schedule") {
      auto toks = tokens(line);
      if (toks.size() != 2) {
        issues.push_back(p.where + ": expected '<step> <arrow-id>'");
        continue;
      }
      double step;
      if (p.number(toks[0], step)) {
        s.schedule.push_back({static_cast<std::size_t>(step), toks[1]});
      }
      continue;
    }

    // remaining sections use whitespace-separated key=value tokens
    std::map<std::string, std::string> kv;
    bool bad = false;
    for (const auto& tok : tokens(line)) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) {
        issues.push_back(p.where + ": expected key=value, got '" + tok + "'");
        bad = true;
        break;
      }
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (bad) continue;
    auto take = [&](const char* key) -> std::optional<std::string> {
      auto it = kv.find(key);
      if (it == kv.end()) return std::nullopt;
      std::string v = it->second;
      kv.erase(it);
      return v;
    };

    if (section == "system") {
      if (auto v = take("label")) s.label = *v;
      if (auto v = take("start")) s.start = *v;
      if (auto v = take("horizon")) {
        double x;
        if (p.number(*v, x)) s.horizon = static_cast<std::size_t>(x);
      }
      if (auto v = take("seed")) {
        double x;
        if (p.number(*v, x)) s.seed = static_cast<std::uint64_t>(x);
      }
      if (auto v = take("initial")) p.vector(*v, s.initial);
      if (auto v = take("cost_mode")) {
        if (*v == "declared") {
          s.admissibility.cost_mode = DeclaredCost{};
        } else if (*v == "entailment_gate") {
          s.admissibility.cost_mode = EntailmentGateCost{};
        } else if (v->rfind("anchor_shift:", 0) == 0) {
          double c0;
          if (p.number(v->substr(13), c0)) s.admissibility.cost_mode = AnchorShiftCost{c0};
        } else {
          issues.push_back(p.where + ": unknown cost_mode '" + *v + "'");
        }
      }
    } else if (section == "regimes") {
      ScenarioRegime r;
      if (auto v = take("id")) {
        r.id = *v;
      } else {
        issues.push_back(p.where + ": regime needs id=");
      }
      if (auto v = take("dim")) {
        double x;
        if (p.number(*v, x)) r.dim = static_cast<Eigen::Index>(x);
      }
      std::optional<Vec> anchor;
      std::optional<double> radius;
      if (auto v = take("anchor")) {
        Vec a;
        if (p.vector(*v, a)) anchor = std::move(a);
      }
      if (auto v = take("radius")) {
        double x;
        if (p.number(*v, x)) radius = x;
      }
      if (anchor && radius) {
        r.floor = ScalarFloor{std::move(*anchor), *radius};
      } else if (anchor || radius) {
        issues.push_back(p.where + ": anchor= and radius= must appear together");
      }
      std::optional<std::string> metric = take("metric");
      std::optional<std::string> floor = take("floor");
      if (metric && floor) {
        double x;
        if (p.number(*floor, x)) r.retention = RetentionFloor{*metric, x};
      } else if (metric || floor) {
        issues.push_back(p.where + ": metric= and floor= must appear together");
      }
      if (auto v = take("core")) {
        if (*v == "none") {
          r.core_declared = false;
        } else {
          issues.push_back(p.where + ": core= only accepts 'none'");
        }
      }
      if (auto v = take("mu")) {
        Vec m;
        if (p.vector(*v, m)) r.mu = std::move(m);
      }
      if (auto v = take("alpha")) {
        double x;
        if (p.number(*v, x)) r.alpha = x;
      }
      if (auto v = take("step")) {
        double x;
        if (p.number(*v, x)) r.step = x;
      }
      if (auto v = take("design")) {
        Mat m;
        if (p.matrix(*v, m)) r.design = std::move(m);
      }
      if (auto v = take("target")) {
        Vec t;
        if (p.vector(*v, t)) r.target = std::move(t);
      }
      s.regimes.push_back(std::move(r));
    } else if (section == "arrows") {
      ScenarioArrow a;
      if (auto v = take("id")) {
        a.id = *v;
      } else {
        issues.push_back(p.where + ": arrow needs id=");
      }
      if (auto v = take("from")) a.source = *v;
      if (auto v = take("to")) a.target = *v;
      if (auto v = take("map")) {
        if (*v == "identity") {
          a.state_map.kind = IdentityMap{};
        } else if (*v == "affine") {
          a.state_map.kind = LinearMap{};
        } else if (v->rfind("gradient:", 0) == 0) {
          double eta;
          if (p.number(v->substr(9), eta)) a.state_map.kind = GradientStepMap{eta};
        } else {
          issues.push_back(p.where + ": unknown map '" + *v + "'");
        }
      }
      if (auto* lin = std::get_if<LinearMap>(&a.state_map.kind)) {
        if (auto v = take("matrix")) p.matrix(*v, lin->matrix);
        if (auto v = take("offset")) p.vector(*v, lin->offset);
        if (lin->offset.size() == 0 && lin->matrix.rows() > 0) {
          lin->offset = Vec::Zero(lin->matrix.rows());
        }
      }
      if (auto v = take("gauge")) {
        Vec g;
        if (p.vector(*v, g) && g.size() == 2) {
          try {
            a.gauge = Gauge(g[0], g[1]);
          } catch (const Error& e) {
            issues.push_back(p.where + ": " + e.what());
          }
        } else {
          issues.push_back(p.where + ": gauge= expects 'scale,shift'");
        }
      }
      if (auto v = take("cost")) {
        double x;
        if (p.number(*v, x)) {
          a.cost = std::isinf(x) ? Cost::infinite() : Cost::finite(x);
        }
      }
      s.arrows.push_back(std::move(a));
    } else if (section == "drift") {
      if (auto v = take("alpha")) {
        double x;
        if (p.number(*v, x)) drift_alpha = x;
      }
      if (auto v = take("delta")) {
        double x;
        if (p.number(*v, x)) drift_delta = x;
      }
      if (auto v = take("beta")) {
        double x;
        if (p.number(*v, x)) drift_beta = x;
      }
    } else if (section == "memory") {
      for (auto& [key, value] : kv) {
        double x;
        if (p.number(value, x)) s.initial_memory.metrics[key] = x;
      }
      kv.clear();
    } else {
      issues.push_back(p.where + ": content before any section header");
    }

    for (const auto& [key, value] : kv) {
      (void)value;
      issues.push_back(p.where + ": unknown key '" + key + "' in [" + section + "]");
    }
  }

  if (drift_alpha || drift_delta || drift_beta) {
    if (drift_alpha && drift_delta && drift_beta) {
      try {
        s.drift = DriftParams(*drift_alpha, *drift_delta, *drift_beta);
      } catch (const Error& e) {
        issues.push_back(std::string("[drift]: ") + e.what());
      }
    } else {
      issues.push_back("[drift]: alpha, delta and beta are all required");
    }
  }
  if (s.start.empty() && !s.regimes.empty()) s.start = s.regimes.front().id;

  if (!issues.empty()) throw InvalidScenario("scenario parse failed", std::move(issues));
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidScenario("cannot open scenario file", {path});
  return parse_scenario(in);
}

std::string format_scenario(const Scenario& s) {
  std::string out;
  out += "[system]\n";
  out += "label=" + s.label + "\n";
  if (std::holds_alternative<EntailmentGateCost>(s.admissibility.cost_mode)) {
    out += "cost_mode=entailment_gate\n";
  } else if (const auto* shift = std::get_if<AnchorShiftCost>(&s.admissibility.cost_mode)) {
    out += "cost_mode=anchor_shift:" + fmt(shift->c0) + "\n";
  } else {
    out += "cost_mode=declared\n";
  }
  out += "horizon=" + std::to_string(s.horizon) + "\n";
  if (s.initial.size() > 0) out += "initial=" + format_vector(s.initial) + "\n";
  if (!s.start.empty()) out += "start=" + s.start + "\n";
  out += "seed=" + std::to_string(s.seed) + "\n";

  out += "\n[regimes]\n";
  for (const auto& r : s.regimes) {
    out += "id=" + r.id + " dim=" + std::to_string(r.dim);
    if (r.floor) {
      out += " anchor=" + format_vector(r.floor->anchor) + " radius=" + fmt(r.floor->radius);
    }
    if (r.retention) {
      out += " metric=" + r.retention->metric + " floor=" + fmt(r.retention->floor);
    }
    if (!r.core_declared) out += " core=none";
    if (r.mu) out += " mu=" + format_vector(*r.mu);
    if (r.alpha) out += " alpha=" + fmt(*r.alpha);
    if (r.step) out += " step=" + fmt(*r.step);
    if (r.design) out += " design=" + format_matrix(*r.design);
    if (r.target) out += " target=" + format_vector(*r.target);
    out += "\n";
  }

  if (!s.arrows.empty()) out += "\n[arrows]\n";
  for (const auto& a : s.arrows) {
    out += "id=" + a.id + " from=" + a.source + " to=" + a.target;
    if (const auto* grad = std::get_if<GradientStepMap>(&a.state_map.kind)) {
      out += " map=gradient:" + fmt(grad->step);
    } else if (const auto* lin = std::get_if<LinearMap>(&a.state_map.kind)) {
      out += " map=affine matrix=" + format_matrix(lin->matrix) +
             " offset=" + format_vector(lin->offset);
    } else {
      out += " map=identity";
    }
    if (!a.gauge.is_identity()) {
      out += " gauge=" + fmt(a.gauge.scale) + "," + fmt(a.gauge.shift);
    }
    out += " cost=" + (a.cost.is_infinite() ? std::string("inf") : fmt(a.cost.value()));
    out += "\n";
  }

  if (!s.schedule.empty()) out += "\n[schedule]\n";
  for (const auto& sw : s.schedule) {
    out += std::to_string(sw.step) + " " + sw.arrow + "\n";
  }

  if (s.drift) {
    out += "\n[drift]\n";
    out += "alpha=" + fmt(s.drift->alpha) + "\n";
    out += "delta=" + fmt(s.drift->delta) + "\n";
    out += "beta=" + fmt(s.drift->beta) + "\n";
  }

  if (!s.initial_memory.metrics.empty()) {
    out += "\n[memory]\n";
    for (const auto& [key, value] : s.initial_memory.metrics) {
      out += key + "=" + fmt(value) + "\n";
    }
  }
  return out;
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
  return format_scenario(a) == format_scenario(b);
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> issues;
  if (s.regimes.empty()) issues.push_back("at least one regime is required");
  if (s.horizon == 0) issues.push_back("horizon must be positive");

  std::map<RegimeId, const ScenarioRegime*> by_id;
  for (const auto& r : s.regimes) {
    if (!by_id.emplace(r.id, &r).second) issues.push_back("duplicate regime id " + r.id);
    if (r.dim <= 0) issues.push_back("regime " + r.id + ": dim must be positive");
    if (!r.core_declared || (!r.floor && !r.retention)) {
      issues.push_back("regime " + r.id + ": every regime must declare a protected core");
    }
    if (r.floor && r.retention) {
      issues.push_back("regime " + r.id + ": declare exactly one protected core");
    }
    if (r.floor) {
      if (r.floor->anchor.size() != r.dim) {
        issues.push_back("regime " + r.id + ": anchor dimension differs from dim");
      }
      if (!(r.floor->radius > 0.0)) {
        issues.push_back("regime " + r.id + ": radius must be positive");
      }
    }
    if (r.alpha && !(*r.alpha > 0.0 && *r.alpha <= 1.0)) {
      issues.push_back("regime " + r.id + ": alpha must lie in (0,1]");
    }
    if (r.alpha && !r.floor && !r.mu) {
      issues.push_back("regime " + r.id + ": contraction dynamics need an anchor");
    }
    if (r.mu && r.mu->size() != r.dim) {
      issues.push_back("regime " + r.id + ": mu dimension differs from dim");
    }
    if (r.step) {
      if (!(*r.step > 0.0)) issues.push_back("regime " + r.id + ": step must be positive");
      if (!r.design || !r.target) {
        issues.push_back("regime " + r.id + ": gradient dynamics need design= and target=");
      }
    }
    if (r.design && r.target) {
      if (r.design->cols() != r.dim || r.design->rows() != r.target->size()) {
        issues.push_back("regime " + r.id + ": design/target dimensions inconsistent");
      }
    } else if (r.design || r.target) {
      issues.push_back("regime " + r.id + ": design= and target= must appear together");
    }
    if (std::holds_alternative<AnchorShiftCost>(s.admissibility.cost_mode) && !r.floor) {
      issues.push_back("regime " + r.id + ": anchor_shift cost mode needs anchored cores");
    }
  }

  const ScenarioRegime* start = nullptr;
  if (auto it = by_id.find(s.start); it != by_id.end()) {
    start = it->second;
  } else if (!s.regimes.empty()) {
    issues.push_back("start regime " + s.start + " is not declared");
  }
  if (start && s.initial.size() != start->dim) {
    issues.push_back("initial state dimension differs from start regime dim");
  }

  std::map<std::string, const ScenarioArrow*> arrows;
  for (const auto& a : s.arrows) {
    if (!arrows.emplace(a.id, &a).second) issues.push_back("duplicate arrow id " + a.id);
    for (const auto& end : {a.source, a.target}) {
      if (!by_id.count(end)) issues.push_back("arrow " + a.id + ": unknown regime " + end);
    }
    if (std::holds_alternative<GradientStepMap>(a.state_map.kind)) {
      auto it = by_id.find(a.source);
      if (it != by_id.end() && (!it->second->design || !it->second->target)) {
        issues.push_back("arrow " + a.id + ": gradient map needs a quadratic source evaluator");
      }
    }
  }

  std::optional<std::size_t> prev;
  for (const auto& sw : s.schedule) {
    if (prev && sw.step <= *prev) issues.push_back("schedule indices must be strictly increasing");
    prev = sw.step;
    if (sw.step >= s.horizon) {
      issues.push_back("schedule step " + std::to_string(sw.step) + " is beyond the horizon");
    }
    if (!arrows.count(sw.arrow)) issues.push_back("schedule references unknown arrow " + sw.arrow);
  }
  return issues;
}

GmlSystem build_system(const Scenario& s) {
  GmlSystem system;
  system.label = s.label;
  system.admissibility = s.admissibility;
  for (const auto& r : s.regimes) {
    ProtectedCore core = r.floor ? ProtectedCore(*r.floor) : ProtectedCore(*r.retention);
    EvaluatorSpec evaluator{ProxyScore{"proxy"}, std::move(core)};
    if (r.design && r.target) evaluator.kind = QuadraticLoss{*r.design, *r.target};
    MemorySpec memory;
    if (r.retention) memory.kind = RetainedCompetence{r.retention->floor};
    system.graph = add_regime(system.graph, Regime{r.id, r.dim, memory, std::move(evaluator)});
  }
  for (const auto& a : s.arrows) {
    system.graph = add_arrow(
        system.graph, Transition{a.id, a.source, a.target, a.state_map, {}, a.gauge, a.cost});
  }
  return system;
}

namespace {

const Vec* dynamics_anchor(const ScenarioRegime& r) {
  if (r.mu) return &*r.mu;
  if (r.floor) return &r.floor->anchor;
  return nullptr;
}

double discrepancy(const ScenarioRegime& r, const Vec& state) {
  const Vec* anchor = dynamics_anchor(r);
  return anchor ? (state - *anchor).squaredNorm() : 0.0;
}

Vec local_update(const ScenarioRegime& r, const Vec& state) {
  if (const Vec* anchor = dynamics_anchor(r); r.alpha && anchor) {
    return *anchor + std::sqrt(1.0 - *r.alpha) * (state - *anchor);
  }
  if (r.step && r.design && r.target) {
    return state - *r.step * r.design->transpose() * (*r.design * state - *r.target);
  }
  return state;
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  if (auto issues = validate_scenario(s); !issues.empty()) {
    throw InvalidScenario("scenario validation failed", std::move(issues));
  }
  GmlSystem system = build_system(s);
  std::map<std::size_t, const ScheduledSwitch*> schedule;
  for (const auto& sw : s.schedule) schedule[sw.step] = &sw;
  std::map<RegimeId, const ScenarioRegime*> by_id;
  for (const auto& r : s.regimes) by_id[r.id] = &r;

  RunReport report;
  report.seed = s.seed;
  const ScenarioRegime* current = by_id.at(s.start);
  Vec state = s.initial;
  MemoryState memory = s.initial_memory;

  for (std::size_t t = 0; t < s.horizon; ++t) {
    StepRecord row{t, current->id, state, discrepancy(*current, state), 0.0, true};
    auto it = schedule.find(t);
    if (it == schedule.end()) {
      state = local_update(*current, state);
      report.steps.push_back(std::move(row));
      continue;
    }
    const Transition* arrow = system.graph.find_arrow(it->second->arrow);
    Certificate cert = certify(system, *arrow, state, memory);
    row.admissible = cert.admissible;
    row.cost = cert.cost.is_infinite() ? std::numeric_limits<double>::infinity()
                                       : cert.cost.value();
    report.certificates.emplace_back(t, cert);
    if (!cert.admissible) {
      report.terminated_at = t;
      report.termination_reasons = cert.reasons;
      report.steps.push_back(std::move(row));
      return report;
    }
    state = *cert.transported_state;
    memory = *cert.transported_memory;
    current = by_id.at(arrow->target);
    report.steps.push_back(std::move(row));
  }
  report.steps.push_back(
      {s.horizon, current->id, state, discrepancy(*current, state), 0.0, true});
  report.completed = true;

  if (s.drift) {
    TrajectoryRecord traj;
    traj.seed = s.seed;
    for (const auto& row : report.steps) traj.w_values.push_back(row.w);
    for (std::size_t t = 0; t + 1 < report.steps.size(); ++t) {
      traj.costs.push_back(report.steps[t].cost);
    }
    report.drift = verify_drift(*s.drift, traj);
  }
  return report;
}

std::string emit_report(const RunReport& r, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "t,regime,w,cost,admissible\n";
    for (const auto& row : r.steps) {
      out += std::to_string(row.t) + "," + row.regime + "," + fmt(row.w) + "," + fmt(row.cost) +
             "," + (row.admissible ? "1" : "0") + "\n";
    }
    return out;
  }

  using json = nlohmann::ordered_json;
  auto cost_json = [](const Cost& c) -> json {
    return c.is_infinite() ? json("inf") : json(c.value());
  };
  auto reasons_json = [](const std::vector<ReasonEntry>& reasons) {
    json out = json::array();
    for (const auto& e : reasons) {
      json entry{{"reason", to_string(e.reason)}, {"detail", e.detail}};
      if (e.segment) entry["segment"] = *e.segment;
      out.push_back(std::move(entry));
    }
    return out;
  };

  json doc;
  doc["seed"] = r.seed;
  if (r.completed) {
    doc["verdict"] = {{"status", "COMPLETED"}};
  } else {
    doc["verdict"] = {{"status", "TERMINATED_AT"},
                      {"step", r.terminated_at ? json(*r.terminated_at) : json()},
                      {"reasons", reasons_json(r.termination_reasons)}};
  }
  doc["steps"] = json::array();
  for (const auto& row : r.steps) {
    std::vector<double> state(row.state.data(), row.state.data() + row.state.size());
    doc["steps"].push_back({{"t", row.t},
                            {"regime", row.regime},
                            {"state", state},
                            {"w", row.w},
                            {"cost", std::isinf(row.cost) ? json("inf") : json(row.cost)},
                            {"admissible", row.admissible}});
  }
  doc["certificates"] = json::array();
  for (const auto& [t, cert] : r.certificates) {
    doc["certificates"].push_back({{"t", t},
                                   {"admissible", cert.admissible},
                                   {"cost", cost_json(cert.cost)},
                                   {"reasons", reasons_json(cert.reasons)}});
  }
  if (r.drift) {
    doc["drift"] = {{"violations", r.drift->violations},
                    {"bound", r.drift->bound},
                    {"final_w", r.drift->final_w},
                    {"final_bound_ok", r.drift->final_bound_ok},
                    {"passed", r.drift->passed()}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace gml
