#include "pansched/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "pansched/error.hpp"

namespace pansched {

using nlohmann::json;

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::baseline: return "R";
    case Strategy::m2: return "M2";
    case Strategy::m1: return "M1";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "R") return Strategy::baseline;
  if (name == "M2") return Strategy::m2;
  if (name == "M1") return Strategy::m1;
  throw Error(Errc::parse_error, "unknown strategy '" + name + "' (expected R, M2 or M1)");
}

ConstraintSet ConstraintSpec::build(std::size_t n) const {
  ConstraintSet cs;
  if (band_min >= 0.0 || band_max >= 0.0) {
    if (band_min < 0.0 || band_max < 0.0) {
      throw Error(Errc::invalid_argument, "occupancy band needs both min and max fractions");
    }
    auto [lower, upper] = build_occupancy_band(n, band_min, band_max);
    cs.lower_groups.push_back(std::move(lower));
    cs.upper_groups.push_back(std::move(upper));
  }
  for (const auto& s : section_minima) {
    GroupBound g;
    g.members = s.members;
    g.bound = s.fraction >= 0.0 ? lower_quota(s.fraction, s.members.size()) : s.bound;
    cs.lower_groups.push_back(std::move(g));
  }
  if (min_presence_days > 0) cs.min_presence_days.assign(n, min_presence_days);
  if (test_capacity >= 0) cs.test_capacity.assign(n, static_cast<std::size_t>(test_capacity));
  cs.validate(n);
  return cs;
}

double ConstraintSpec::resolve_pr(std::size_t horizon) const {
  if (pr_test >= 0.0) return pr_test;
  if (test_capacity >= 0 && horizon > 0) {
    return static_cast<double>(test_capacity) / static_cast<double>(horizon);
  }
  return 0.0;
}

namespace {

void expect_keys(const json& obj, std::initializer_list<const char*> allowed, const char* ctx) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw Error(Errc::parse_error, std::string("unknown key '") + key + "' in " + ctx);
    }
  }
}

GraphSpec parse_graph(const json& j) {
  expect_keys(j, {"source", "path", "n", "profile", "seed", "observation_days"}, "graph");
  GraphSpec g;
  std::string source = j.at("source").get<std::string>();
  if (source == "edge_list") {
    g.source = GraphSpec::Source::edge_list;
    g.path = j.at("path").get<std::string>();
  } else if (source == "interactions") {
    g.source = GraphSpec::Source::interactions;
    g.path = j.at("path").get<std::string>();
  } else if (source == "random") {
    g.source = GraphSpec::Source::random;
    g.n = j.at("n").get<std::size_t>();
  } else if (source == "base20") {
    g.source = GraphSpec::Source::base20;
  } else {
    throw Error(Errc::parse_error, "unknown graph source '" + source + "'");
  }
  if (j.contains("profile")) {
    std::string p = j["profile"].get<std::string>();
    if (p == "sparse")
      g.profile = RandomGraphKind::sparse;
    else if (p == "dense")
      g.profile = RandomGraphKind::dense;
    else
      throw Error(Errc::parse_error, "unknown graph profile '" + p + "'");
  }
  if (j.contains("seed")) g.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("observation_days")) g.observation_days = j["observation_days"].get<std::size_t>();
  return g;
}

VaccinationSpec parse_vaccination(const json& j) {
  expect_keys(j, {"fraction", "seed"}, "vaccination");
  VaccinationSpec v;
  v.enabled = true;
  v.fraction = j.at("fraction").get<double>();
  if (j.contains("seed")) v.seed = j["seed"].get<std::uint64_t>();
  return v;
}

EpidemicParams parse_params(const json& j) {
  expect_keys(j,
              {"beta_base", "vaccine_efficacy", "false_negative", "background_risk", "horizon",
               "initial_risk_policy"},
              "params");
  EpidemicParams p;
  if (j.contains("beta_base")) p.beta_base = j["beta_base"].get<double>();
  if (j.contains("vaccine_efficacy")) p.vaccine_efficacy = j["vaccine_efficacy"].get<double>();
  if (j.contains("false_negative")) p.false_negative = j["false_negative"].get<double>();
  if (j.contains("background_risk")) p.background_risk = j["background_risk"].get<double>();
  if (j.contains("horizon")) p.horizon = j["horizon"].get<std::size_t>();
  if (j.contains("initial_risk_policy")) {
    std::string policy = j["initial_risk_policy"].get<std::string>();
    if (policy == "model_spec")
      p.initial_risk_policy = InitialRiskPolicy::model_spec;
    else if (policy == "weekend_compounded")
      p.initial_risk_policy = InitialRiskPolicy::weekend_compounded;
    else
      throw Error(Errc::parse_error, "unknown initial_risk_policy '" + policy + "'");
  }
  return p;
}

PropagationMode parse_mode(const std::string& mode) {
  if (mode == "exact") return PropagationMode::exact;
  if (mode == "linearized") return PropagationMode::linearized;
  throw Error(Errc::parse_error, "unknown mode '" + mode + "' (expected exact or linearized)");
}

ConstraintSpec parse_constraints(const json& j) {
  expect_keys(j, {"occupancy_band", "section_minima", "min_presence_days", "test_capacity", "pr_test"},
              "constraints");
  ConstraintSpec c;
  if (j.contains("occupancy_band")) {
    const auto& band = j["occupancy_band"];
    if (!band.is_array() || band.size() != 2) {
      throw Error(Errc::parse_error, "occupancy_band must be [min_frac, max_frac]");
    }
    c.band_min = band[0].get<double>();
    c.band_max = band[1].get<double>();
  }
  if (j.contains("section_minima")) {
    for (const auto& s : j["section_minima"]) {
      expect_keys(s, {"members", "fraction", "bound"}, "section_minima entry");
      ConstraintSpec::SectionMin m;
      m.members = s.at("members").get<std::vector<std::size_t>>();
      if (s.contains("fraction")) m.fraction = s["fraction"].get<double>();
      else m.bound = s.at("bound").get<std::size_t>();
      c.section_minima.push_back(std::move(m));
    }
  }
  if (j.contains("min_presence_days")) c.min_presence_days = j["min_presence_days"].get<std::size_t>();
  if (j.contains("test_capacity")) c.test_capacity = j["test_capacity"].get<long>();
  if (j.contains("pr_test")) c.pr_test = j["pr_test"].get<double>();
  return c;
}

GaConfig parse_ga(const json& j) {
  expect_keys(j, {"population_size", "max_generations", "mutation_prob", "tournament_size", "crossover_prob"},
              "ga");
  GaConfig g;
  if (j.contains("population_size")) g.population_size = j["population_size"].get<std::size_t>();
  if (j.contains("max_generations")) g.max_generations = j["max_generations"].get<std::size_t>();
  if (j.contains("mutation_prob")) g.mutation_prob = j["mutation_prob"].get<double>();
  if (j.contains("tournament_size")) g.tournament_size = j["tournament_size"].get<std::size_t>();
  if (j.contains("crossover_prob")) g.crossover_prob = j["crossover_prob"].get<double>();
  return g;
}

ScenarioConfig parse_scenario(const json& j) {
  expect_keys(j, {"graph", "vaccination", "params", "mode", "constraints", "strategy", "ga",
                  "repetitions", "seed"},
              "scenario config");
  ScenarioConfig cfg;
  cfg.graph = parse_graph(j.at("graph"));
  if (j.contains("vaccination")) cfg.vaccination = parse_vaccination(j["vaccination"]);
  if (j.contains("params")) cfg.params = parse_params(j["params"]);
  if (j.contains("mode")) cfg.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("constraints")) cfg.constraints = parse_constraints(j["constraints"]);
  if (j.contains("strategy")) cfg.strategy = strategy_from_name(j["strategy"].get<std::string>());
  if (j.contains("ga")) cfg.ga = parse_ga(j["ga"]);
  if (j.contains("repetitions")) cfg.repetitions = j["repetitions"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (cfg.repetitions < 1) throw Error(Errc::parse_error, "repetitions must be >= 1");
  cfg.params.validate();
  return cfg;
}

json parse_json_text(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::parse_error, "invalid JSON in " + what);
  if (!j.is_object()) throw Error(Errc::parse_error, what + " must be a JSON object");
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Axis names use dots, json_pointer wants slashes.
std::string axis_pointer(const std::string& name) {
  std::string p = "/" + name;
  std::replace(p.begin(), p.end(), '.', '/');
  return p;
}

// json type errors (wrong type, missing key) surface as json exceptions;
// translate them so callers see a uniform parse error.
template <typename Fn>
auto translating_json_errors(Fn&& fn, const std::string& what) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, what + ": " + e.what());
  }
}

}  // namespace

ScenarioConfig load_scenario_string(const std::string& text) {
  return translating_json_errors([&] { return parse_scenario(parse_json_text(text, "scenario config")); },
                                 "scenario config");
}

ScenarioConfig load_scenario_file(const std::string& path) {
  return translating_json_errors([&] { return parse_scenario(parse_json_text(read_file(path), path)); },
                                 path);
}

ContactGraph base_case_graph(std::uint64_t seed) {
  const std::size_t n = 20;
  const std::size_t section_split = 12;  // employees 0..11 vs 12..19
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ContactGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool same_section = (i < section_split) == (j < section_split);
      double r = u(rng);
      double p = 0.0;
      if (same_section) {
        p = r < 0.15 ? 1.0 : (r < 0.40 ? 0.5 : 0.0);
      } else {
        p = r < 0.02 ? 1.0 : (r < 0.10 ? 0.5 : 0.0);
      }
      if (p > 0.0) g.set_contact(i, j, p);
    }
  }
  return g;
}

ConstraintSet base_case_constraints() {
  ConstraintSpec spec;
  spec.band_min = 0.5;
  spec.band_max = 0.75;
  ConstraintSpec::SectionMin s1, s2;
  for (std::size_t i = 0; i < 12; ++i) s1.members.push_back(i);
  for (std::size_t i = 12; i < 20; ++i) s2.members.push_back(i);
  s1.fraction = 0.3;
  s2.fraction = 0.3;
  spec.section_minima = {s1, s2};
  spec.min_presence_days = 2;
  spec.test_capacity = 2;
  return spec.build(20);
}

ContactGraph build_graph(const GraphSpec& spec, const VaccinationSpec& vac) {
  ContactGraph g;
  switch (spec.source) {
    case GraphSpec::Source::edge_list:
      g = load_edge_list_bundle(spec.path).graph;
      break;
    case GraphSpec::Source::interactions: {
      auto records = read_interaction_log_file(spec.path);
      g = build_from_interactions(records, spec.observation_days).graph;
      break;
    }
    case GraphSpec::Source::random:
      g = gen_random_graph(spec.n, spec.profile, spec.seed);
      break;
    case GraphSpec::Source::base20:
      g = base_case_graph(spec.seed);
      break;
  }
  if (vac.enabled) assign_vaccination(g, vac.fraction, vac.seed);
  return g;
}

namespace {

// Everything a repetition job needs, built once per scenario or grid cell.
struct Context {
  ContactGraph graph;
  ConstraintSet cs;
  EpidemicParams params;
  PropagationMode mode = PropagationMode::exact;
  double pr = 0.0;
  bool test_budget = false;
  GaConfig ga;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
};

Context make_context(const ScenarioConfig& cfg) {
  Context ctx;
  ctx.graph = build_graph(cfg.graph, cfg.vaccination);
  ctx.cs = cfg.constraints.build(ctx.graph.size());
  ctx.params = cfg.params;
  ctx.mode = cfg.mode;
  ctx.pr = cfg.constraints.resolve_pr(cfg.params.horizon);
  ctx.test_budget = cfg.constraints.has_test_budget();
  ctx.ga = cfg.ga;
  ctx.repetitions = cfg.repetitions;
  ctx.seed = cfg.seed;
  return ctx;
}

RepOutcome from_solve(SolveResult&& r) {
  RepOutcome o;
  o.risk = r.risk;
  o.feasible = r.feasible;
  o.violations = r.violations;
  o.schedule = std::move(r.schedule);
  o.tests = std::move(r.tests);
  o.has_tests = r.has_tests;
  return o;
}

RepOutcome run_rep(const Context& ctx, Strategy strategy, std::size_t rep) {
  GaConfig ga = ctx.ga;
  ga.seed = ctx.seed + rep;
  const std::size_t days = ctx.params.horizon;

  switch (strategy) {
    case Strategy::baseline: {
      // Random feasible solution, evaluated under the cell's testing
      // assumption: scheduled random tests under a test budget, the random
      // testing probability otherwise.
      Model shape = ctx.test_budget ? Model::m1 : Model::m2;
      RandomFeasible rf = random_feasible(ctx.graph, ctx.cs, days, ga, shape);
      Propagator prop(ctx.graph, ctx.params, ctx.mode);
      Propagator::Workspace ws;
      RepOutcome o;
      o.feasible = true;
      o.schedule = std::move(rf.schedule);
      o.tests = std::move(rf.tests);
      o.has_tests = rf.has_tests;
      o.risk = o.has_tests ? prop.run_model1(o.schedule.on.data(), o.tests.given.data(), days, ws)
                           : prop.run_model2(o.schedule.on.data(), ctx.pr, days, ws);
      return o;
    }
    case Strategy::m2:
      return from_solve(solve_model2(ctx.graph, ctx.params, ctx.cs, ctx.pr, ga, ctx.mode));
    case Strategy::m1:
      return from_solve(solve_model1(ctx.graph, ctx.params, ctx.cs, ga, ctx.mode));
  }
  throw Error(Errc::invalid_argument, "unknown strategy");
}

ScenarioResult collect(std::vector<RepOutcome>&& reps) {
  ScenarioResult out;
  out.feasible = true;
  double sum = 0.0;
  std::size_t best_at = 0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    out.risks.push_back(reps[r].risk);
    sum += reps[r].risk;
    out.feasible = out.feasible && reps[r].feasible;
    const bool better = reps[r].feasible &&
                        (!reps[best_at].feasible || reps[r].risk < reps[best_at].risk);
    if (better) best_at = r;
  }
  out.mean_risk = sum / static_cast<double>(reps.size());
  out.best = std::move(reps[best_at]);
  return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  Context ctx = make_context(cfg);
  std::vector<RepOutcome> reps;
  reps.reserve(ctx.repetitions);
  for (std::size_t r = 0; r < ctx.repetitions; ++r) {
    reps.push_back(run_rep(ctx, cfg.strategy, r));
  }
  return collect(std::move(reps));
}

GridConfig load_grid_string(const std::string& text) {
  return translating_json_errors(
      [&] {
        json j = parse_json_text(text, "grid config");
        expect_keys(j, {"base", "axes", "strategies"}, "grid config");
        GridConfig grid;
        grid.base = j.at("base");
        if (!grid.base.is_object()) throw Error(Errc::parse_error, "grid base must be an object");
        const auto& axes = j.at("axes");
        if (!axes.is_array() || axes.empty()) {
          throw Error(Errc::parse_error, "grid needs a non-empty axes array");
        }
        for (const auto& a : axes) {
          expect_keys(a, {"name", "values"}, "grid axis");
          GridAxis axis;
          axis.name = a.at("name").get<std::string>();
          const auto& values = a.at("values");
          if (!values.is_array() || values.empty()) {
            throw Error(Errc::parse_error, "axis '" + axis.name + "' needs a non-empty values array");
          }
          for (const auto& v : values) axis.values.push_back(v);
          grid.axes.push_back(std::move(axis));
        }
        if (j.contains("strategies")) {
          grid.strategies.clear();
          for (const auto& s : j["strategies"]) {
            grid.strategies.push_back(strategy_from_name(s.get<std::string>()));
          }
          if (grid.strategies.empty()) throw Error(Errc::parse_error, "strategies must be non-empty");
        }
        // Surface base-config mistakes before the grid starts burning time.
        json probe = grid.base;
        for (const auto& axis : grid.axes) {
          probe[json::json_pointer(axis_pointer(axis.name))] = axis.values.front();
        }
        (void)parse_scenario(probe);
        return grid;
      },
      "grid config");
}

GridConfig load_grid_file(const std::string& path) {
  return translating_json_errors([&] { return load_grid_string(read_file(path)); }, path);
}

namespace {

std::string compact_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void run_jobs(std::vector<std::function<void()>>& jobs, std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  if (threads <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) jobs[j]();
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

GridResult run_grid(const GridConfig& grid, const GridOverrides& overrides, std::size_t threads) {
  if (grid.axes.empty()) throw Error(Errc::invalid_argument, "grid has no axes");
  if (grid.strategies.empty()) throw Error(Errc::invalid_argument, "grid has no strategies");

  std::size_t cell_count = 1;
  for (const auto& axis : grid.axes) cell_count *= axis.values.size();

  GridResult result;
  result.strategies = grid.strategies;
  result.cells.resize(cell_count);

  struct CellState {
    bool ok = false;
    Context ctx;
  };
  std::vector<CellState> states(cell_count);

  // Row-major over the axes, last axis fastest; mirrors the table layout.
  for (std::size_t c = 0; c < cell_count; ++c) {
    GridCell& cell = result.cells[c];
    json cfg_json = grid.base;
    std::size_t rest = c;
    std::size_t stride = cell_count;
    for (const auto& axis : grid.axes) {
      stride /= axis.values.size();
      const json& value = axis.values[rest / stride];
      rest %= stride;
      cfg_json[json::json_pointer(axis_pointer(axis.name))] = value;
      cell.coords.emplace_back(axis.name, compact_value(value));
    }
    try {
      ScenarioConfig cfg = translating_json_errors([&] { return parse_scenario(cfg_json); }, "grid cell");
      if (overrides.seed) cfg.seed = *overrides.seed;
      if (overrides.repetitions) cfg.repetitions = *overrides.repetitions;
      if (overrides.mode) cfg.mode = *overrides.mode;
      states[c].ctx = make_context(cfg);
      states[c].ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    cell.mean_risk.assign(grid.strategies.size(), std::numeric_limits<double>::quiet_NaN());
  }

  // One job per (cell, strategy, repetition); slot writes are disjoint and
  // seeds depend only on (cell seed, repetition), so any pool size yields the
  // same table.
  struct Slot {
    double risk = std::numeric_limits<double>::quiet_NaN();
    std::string error;
  };
  std::vector<std::size_t> offsets(cell_count, 0);
  std::size_t total_jobs = 0;
  for (std::size_t c = 0; c < cell_count; ++c) {
    offsets[c] = total_jobs;
    if (states[c].ok) total_jobs += grid.strategies.size() * states[c].ctx.repetitions;
  }
  std::vector<Slot> slots(total_jobs);
  std::vector<std::function<void()>> jobs;
  jobs.reserve(total_jobs);
  for (std::size_t c = 0; c < cell_count; ++c) {
    if (!states[c].ok) continue;
    const Context& ctx = states[c].ctx;
    for (std::size_t s = 0; s < grid.strategies.size(); ++s) {
      for (std::size_t r = 0; r < ctx.repetitions; ++r) {
        std::size_t slot = offsets[c] + s * ctx.repetitions + r;
        Strategy strat = grid.strategies[s];
        jobs.push_back([&ctx, strat, r, slot, &slots] {
          try {
            RepOutcome o = run_rep(ctx, strat, r);
            if (!o.feasible) {
              slots[slot].error = "no feasible solution found (violations=" +
                                  std::to_string(o.violations) + ")";
            }
            slots[slot].risk = o.risk;
          } catch (const std::exception& e) {
            slots[slot].error = e.what();
          }
        });
      }
    }
  }
  run_jobs(jobs, threads);

  for (std::size_t c = 0; c < cell_count; ++c) {
    if (!states[c].ok) continue;
    GridCell& cell = result.cells[c];
    const std::size_t reps = states[c].ctx.repetitions;
    for (std::size_t s = 0; s < grid.strategies.size(); ++s) {
      double sum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const Slot& slot = slots[offsets[c] + s * reps + r];
        if (!slot.error.empty() && cell.error.empty()) cell.error = slot.error;
        sum += slot.risk;
      }
      cell.mean_risk[s] = sum / static_cast<double>(reps);
    }
  }
  return result;
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown") return ReportFormat::markdown;
  throw Error(Errc::parse_error, "unknown format '" + name + "' (expected csv or markdown)");
}

namespace {

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  q += '"';
  return q;
}

}  // namespace

std::string render_report(const GridResult& result, ReportFormat format) {
  // Column set: axis names (from the first cell), strategy risks scaled by
  // 1e5, reductions vs the baseline for every non-baseline strategy, error.
  std::vector<std::string> headers;
  if (!result.cells.empty()) {
    for (const auto& [name, value] : result.cells.front().coords) {
      (void)value;
      headers.push_back(name);
    }
  }
  std::ptrdiff_t baseline_at = -1;
  for (std::size_t s = 0; s < result.strategies.size(); ++s) {
    if (result.strategies[s] == Strategy::baseline) baseline_at = static_cast<std::ptrdiff_t>(s);
    headers.push_back(strategy_name(result.strategies[s]));
  }
  std::vector<std::size_t> reduction_cols;
  if (baseline_at >= 0) {
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
      if (result.strategies[s] == Strategy::baseline) continue;
      reduction_cols.push_back(s);
      headers.push_back(std::string("red_") + strategy_name(result.strategies[s]) + "_pct");
    }
  }
  headers.push_back("error");

  std::vector<std::vector<std::string>> rows;
  for (const auto& cell : result.cells) {
    std::vector<std::string> row;
    for (const auto& [name, value] : cell.coords) {
      (void)name;
      row.push_back(value);
    }
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
      row.push_back(cell.error.empty() ? fixed(cell.mean_risk[s] * 1e5, 2) : "");
    }
    for (std::size_t s : reduction_cols) {
      double base = baseline_at >= 0 ? cell.mean_risk[static_cast<std::size_t>(baseline_at)] : 0.0;
      if (cell.error.empty() && base > 0.0) {
        row.push_back(fixed((1.0 - cell.mean_risk[s] / base) * 100.0, 1));
      } else {
        row.emplace_back();
      }
    }
    row.push_back(cell.error);
    rows.push_back(std::move(row));
  }

  std::ostringstream out;
  if (format == ReportFormat::csv) {
    for (std::size_t h = 0; h < headers.size(); ++h) {
      if (h) out << ',';
      out << csv_quote(headers[h]);
    }
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t f = 0; f < row.size(); ++f) {
        if (f) out << ',';
        out << csv_quote(row[f]);
      }
      out << '\n';
    }
  } else {
    auto emit_row = [&](const std::vector<std::string>& cells) {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
      out << '\n';
    };
    emit_row(headers);
    std::vector<std::string> rule(headers.size(), "---");
    emit_row(rule);
    for (const auto& row : rows) emit_row(row);
  }
  return out.str();
}

void write_report(const GridResult& result, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write report: " + path);
  out << render_report(result, format);
  if (!out) throw Error(Errc::io_error, "short write: " + path);
}

namespace {

json matrix_rows(const std::vector<std::uint8_t>& flat, std::size_t n, std::size_t days) {
  // Employee-major rows for human inspection, matching the published
  // strategy tables; storage is day-major.
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t d = 0; d < days; ++d) row.push_back(static_cast<int>(flat[d * n + i]));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json scenario_result_to_json(const ScenarioResult& result, Strategy strategy) {
  json j;
  j["strategy"] = strategy_name(strategy);
  j["feasible"] = result.feasible;
  j["mean_risk"] = result.mean_risk;
  j["risks"] = result.risks;
  json best;
  best["risk"] = result.best.risk;
  best["violations"] = result.best.violations;
  best["schedule"] = matrix_rows(result.best.schedule.on, result.best.schedule.n,
                                 result.best.schedule.days);
  json heads = json::array();
  for (std::size_t d = 0; d < result.best.schedule.days; ++d) {
    heads.push_back(result.best.schedule.headcount(d));
  }
  best["daily_headcount"] = heads;
  if (result.best.has_tests) {
    best["tests"] = matrix_rows(result.best.tests.given, result.best.tests.n, result.best.tests.days);
  }
  j["best"] = std::move(best);
  return j;
}

json oracle_result_to_json(const OracleResult& result) {
  json j;
  j["risk"] = result.risk;
  j["states_visited"] = result.states_visited;
  j["leaves"] = result.leaves;
  j["schedule"] = matrix_rows(result.schedule.on, result.schedule.n, result.schedule.days);
  if (result.has_tests) {
    j["tests"] = matrix_rows(result.tests.given, result.tests.n, result.tests.days);
  }
  return j;
}

}  // namespace pansched
