#include "pansched.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pansched/contact_graph.hpp"
#include "pansched/error.hpp"
#include "pansched/exact_oracle.hpp"
#include "pansched/scenario.hpp"

struct ps_graph {
  pansched::ContactGraph g;
  std::vector<std::int64_t> external_ids;
  // provenance for the export sidecar
  std::string profile;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

struct ps_scenario {
  pansched::ScenarioConfig cfg;
};

struct ps_result {
  bool oracle = false;
  pansched::Strategy strategy = pansched::Strategy::m1;
  pansched::ScenarioResult scen;
  pansched::OracleResult orc;

  const pansched::Schedule& schedule() const { return oracle ? orc.schedule : scen.best.schedule; }
  const pansched::TestPlan& tests() const { return oracle ? orc.tests : scen.best.tests; }
  bool has_tests() const { return oracle ? orc.has_tests : scen.best.has_tests; }
};

struct ps_grid {
  pansched::GridConfig grid;
  pansched::GridOverrides overrides;
};

struct ps_table {
  pansched::GridResult result;
};

namespace {

thread_local std::string t_error;

ps_status status_of(pansched::Errc c) {
  switch (c) {
    case pansched::Errc::invalid_argument: return PS_ERR_INVALID_ARGUMENT;
    case pansched::Errc::parse_error: return PS_ERR_PARSE;
    case pansched::Errc::io_error: return PS_ERR_IO;
    case pansched::Errc::infeasible: return PS_ERR_INFEASIBLE;
    case pansched::Errc::budget_exceeded: return PS_ERR_BUDGET;
  }
  return PS_ERR_UNKNOWN;
}

template <typename Fn>
ps_status guarded(Fn&& fn) {
  t_error.clear();
  try {
    fn();
    return PS_OK;
  } catch (const pansched::Error& e) {
    t_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_error = e.what();
    return PS_ERR_UNKNOWN;
  } catch (...) {
    t_error = "unknown error";
    return PS_ERR_UNKNOWN;
  }
}

ps_status fail_invalid(const char* msg) {
  t_error = msg;
  return PS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ps_last_error(void) { return t_error.c_str(); }

const char* ps_version(void) { return "1.0.0"; }

/* ---- contact graphs ---------------------------------------------------- */

ps_status ps_graph_load_edge_list(const char* path, size_t n, ps_graph** out) {
  if (!path || !out) return fail_invalid("ps_graph_load_edge_list: null argument");
  return guarded([&] {
    auto bundle = pansched::load_edge_list_bundle(path, n);
    auto h = std::make_unique<ps_graph>();
    h->g = std::move(bundle.graph);
    h->external_ids = std::move(bundle.meta.external_ids);
    h->profile = std::move(bundle.meta.profile);
    h->has_seed = bundle.meta.has_seed;
    h->seed = bundle.meta.seed;
    *out = h.release();
  });
}

ps_status ps_graph_from_interaction_log(const char* path, size_t observation_days, ps_graph** out) {
  if (!path || !out) return fail_invalid("ps_graph_from_interaction_log: null argument");
  return guarded([&] {
    auto records = pansched::read_interaction_log_file(path);
    auto ingest = pansched::build_from_interactions(records, observation_days);
    auto h = std::make_unique<ps_graph>();
    h->g = std::move(ingest.graph);
    h->external_ids = std::move(ingest.external_ids);
    *out = h.release();
  });
}

ps_status ps_graph_random(size_t n, const char* profile, uint64_t seed, ps_graph** out) {
  if (!profile || !out) return fail_invalid("ps_graph_random: null argument");
  return guarded([&] {
    std::string p = profile;
    pansched::RandomGraphKind kind;
    if (p == "sparse")
      kind = pansched::RandomGraphKind::sparse;
    else if (p == "dense")
      kind = pansched::RandomGraphKind::dense;
    else
      throw pansched::Error(pansched::Errc::invalid_argument,
                            "unknown profile '" + p + "' (expected sparse or dense)");
    auto h = std::make_unique<ps_graph>();
    h->g = pansched::gen_random_graph(n, kind, seed);
    h->profile = p;
    h->has_seed = true;
    h->seed = seed;
    *out = h.release();
  });
}

ps_status ps_graph_base20(uint64_t seed, ps_graph** out) {
  if (!out) return fail_invalid("ps_graph_base20: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_graph>();
    h->g = pansched::base_case_graph(seed);
    h->profile = "base20";
    h->has_seed = true;
    h->seed = seed;
    *out = h.release();
  });
}

ps_status ps_graph_assign_vaccination(ps_graph* graph, double fraction, uint64_t seed) {
  if (!graph) return fail_invalid("ps_graph_assign_vaccination: null graph");
  return guarded([&] { pansched::assign_vaccination(graph->g, fraction, seed); });
}

ps_status ps_graph_save(const ps_graph* graph, const char* path) {
  if (!graph || !path) return fail_invalid("ps_graph_save: null argument");
  return guarded([&] {
    pansched::EdgeListMeta meta;
    meta.profile = graph->profile;
    meta.has_seed = graph->has_seed;
    meta.seed = graph->seed;
    meta.external_ids = graph->external_ids;
    pansched::save_edge_list(graph->g, path, meta);
  });
}

size_t ps_graph_employees(const ps_graph* graph) { return graph ? graph->g.size() : 0; }

size_t ps_graph_edges(const ps_graph* graph) { return graph ? graph->g.edge_count() : 0; }

double ps_graph_contact(const ps_graph* graph, size_t i, size_t j) {
  if (!graph || i >= graph->g.size() || j >= graph->g.size()) return std::nan("");
  return graph->g.contact(i, j);
}

int ps_graph_vaccinated(const ps_graph* graph, size_t i) {
  if (!graph || i >= graph->g.size()) return -1;
  return graph->g.vaccinated(i) ? 1 : 0;
}

int ps_graph_external_id(const ps_graph* graph, size_t i, int64_t* out) {
  if (!graph || !out || i >= graph->external_ids.size()) return 0;
  *out = graph->external_ids[i];
  return 1;
}

void ps_graph_free(ps_graph* graph) { delete graph; }

/* ---- single scenarios -------------------------------------------------- */

ps_status ps_scenario_load(const char* path, ps_scenario** out) {
  if (!path || !out) return fail_invalid("ps_scenario_load: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_scenario>();
    h->cfg = pansched::load_scenario_file(path);
    *out = h.release();
  });
}

ps_status ps_scenario_load_string(const char* text, ps_scenario** out) {
  if (!text || !out) return fail_invalid("ps_scenario_load_string: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_scenario>();
    h->cfg = pansched::load_scenario_string(text);
    *out = h.release();
  });
}

ps_status ps_scenario_set_seed(ps_scenario* scenario, uint64_t seed) {
  if (!scenario) return fail_invalid("ps_scenario_set_seed: null scenario");
  scenario->cfg.seed = seed;
  t_error.clear();
  return PS_OK;
}

ps_status ps_scenario_set_repetitions(ps_scenario* scenario, size_t repetitions) {
  if (!scenario) return fail_invalid("ps_scenario_set_repetitions: null scenario");
  if (repetitions < 1) return fail_invalid("repetitions must be >= 1");
  scenario->cfg.repetitions = repetitions;
  t_error.clear();
  return PS_OK;
}

ps_status ps_scenario_set_mode(ps_scenario* scenario, const char* mode) {
  if (!scenario || !mode) return fail_invalid("ps_scenario_set_mode: null argument");
  return guarded([&] {
    std::string m = mode;
    if (m == "exact")
      scenario->cfg.mode = pansched::PropagationMode::exact;
    else if (m == "linearized")
      scenario->cfg.mode = pansched::PropagationMode::linearized;
    else
      throw pansched::Error(pansched::Errc::invalid_argument,
                            "unknown mode '" + m + "' (expected exact or linearized)");
  });
}

ps_status ps_scenario_set_strategy(ps_scenario* scenario, const char* strategy) {
  if (!scenario || !strategy) return fail_invalid("ps_scenario_set_strategy: null argument");
  return guarded([&] { scenario->cfg.strategy = pansched::strategy_from_name(strategy); });
}

ps_status ps_scenario_run(const ps_scenario* scenario, ps_result** out) {
  if (!scenario || !out) return fail_invalid("ps_scenario_run: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_result>();
    h->oracle = false;
    h->strategy = scenario->cfg.strategy;
    h->scen = pansched::run_scenario(scenario->cfg);
    *out = h.release();
  });
}

ps_status ps_scenario_run_oracle(const ps_scenario* scenario, uint64_t max_states, ps_result** out) {
  if (!scenario || !out) return fail_invalid("ps_scenario_run_oracle: null argument");
  return guarded([&] {
    const pansched::ScenarioConfig& cfg = scenario->cfg;
    pansched::Model model;
    switch (cfg.strategy) {
      case pansched::Strategy::m1: model = pansched::Model::m1; break;
      case pansched::Strategy::m2: model = pansched::Model::m2; break;
      default:
        throw pansched::Error(pansched::Errc::invalid_argument,
                              "oracle needs strategy M1 or M2");
    }
    pansched::ContactGraph g = pansched::build_graph(cfg.graph, cfg.vaccination);
    pansched::ConstraintSet cs = cfg.constraints.build(g.size());
    double pr = cfg.constraints.resolve_pr(cfg.params.horizon);
    pansched::OracleBudget budget;
    if (max_states > 0) budget.max_states = max_states;
    auto h = std::make_unique<ps_result>();
    h->oracle = true;
    h->strategy = cfg.strategy;
    h->orc = pansched::enumerate_optimum(g, cfg.params, cs, model, pr, cfg.mode, budget);
    *out = h.release();
  });
}

void ps_scenario_free(ps_scenario* scenario) { delete scenario; }

/* ---- results ----------------------------------------------------------- */

double ps_result_mean_risk(const ps_result* result) {
  if (!result) return std::nan("");
  return result->oracle ? result->orc.risk : result->scen.mean_risk;
}

int ps_result_feasible(const ps_result* result) {
  if (!result) return 0;
  return result->oracle ? 1 : (result->scen.feasible ? 1 : 0);
}

size_t ps_result_repetitions(const ps_result* result) {
  if (!result) return 0;
  return result->oracle ? 1 : result->scen.risks.size();
}

double ps_result_risk(const ps_result* result, size_t rep) {
  if (!result || rep >= ps_result_repetitions(result)) return std::nan("");
  return result->oracle ? result->orc.risk : result->scen.risks[rep];
}

size_t ps_result_employees(const ps_result* result) {
  return result ? result->schedule().n : 0;
}

size_t ps_result_days(const ps_result* result) {
  return result ? result->schedule().days : 0;
}

int ps_result_present(const ps_result* result, size_t employee, size_t day) {
  if (!result) return -1;
  const pansched::Schedule& s = result->schedule();
  if (employee >= s.n || day >= s.days) return -1;
  return s.present(employee, day) ? 1 : 0;
}

int ps_result_has_tests(const ps_result* result) {
  return result && result->has_tests() ? 1 : 0;
}

int ps_result_tested(const ps_result* result, size_t employee, size_t day) {
  if (!result || !result->has_tests()) return -1;
  const pansched::TestPlan& t = result->tests();
  if (employee >= t.n || day >= t.days) return -1;
  return t.tested(employee, day) ? 1 : 0;
}

uint64_t ps_result_states_visited(const ps_result* result) {
  return result && result->oracle ? result->orc.states_visited : 0;
}

ps_status ps_result_write_json(const ps_result* result, const char* path) {
  if (!result) return fail_invalid("ps_result_write_json: null result");
  return guarded([&] {
    nlohmann::json j = result->oracle
                           ? pansched::oracle_result_to_json(result->orc)
                           : pansched::scenario_result_to_json(result->scen, result->strategy);
    std::string text = j.dump(2);
    text.push_back('\n');
    if (path) {
      std::ofstream out(path);
      if (!out) throw pansched::Error(pansched::Errc::io_error, std::string("cannot write ") + path);
      out << text;
      if (!out) throw pansched::Error(pansched::Errc::io_error, std::string("short write: ") + path);
    } else {
      std::cout << text << std::flush;
    }
  });
}

void ps_result_free(ps_result* result) { delete result; }

/* ---- scenario grids ---------------------------------------------------- */

ps_status ps_grid_load(const char* path, ps_grid** out) {
  if (!path || !out) return fail_invalid("ps_grid_load: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_grid>();
    h->grid = pansched::load_grid_file(path);
    *out = h.release();
  });
}

ps_status ps_grid_load_string(const char* text, ps_grid** out) {
  if (!text || !out) return fail_invalid("ps_grid_load_string: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_grid>();
    h->grid = pansched::load_grid_string(text);
    *out = h.release();
  });
}

ps_status ps_grid_set_seed(ps_grid* grid, uint64_t seed) {
  if (!grid) return fail_invalid("ps_grid_set_seed: null grid");
  grid->overrides.seed = seed;
  t_error.clear();
  return PS_OK;
}

ps_status ps_grid_set_repetitions(ps_grid* grid, size_t repetitions) {
  if (!grid) return fail_invalid("ps_grid_set_repetitions: null grid");
  if (repetitions < 1) return fail_invalid("repetitions must be >= 1");
  grid->overrides.repetitions = repetitions;
  t_error.clear();
  return PS_OK;
}

ps_status ps_grid_set_mode(ps_grid* grid, const char* mode) {
  if (!grid || !mode) return fail_invalid("ps_grid_set_mode: null argument");
  return guarded([&] {
    std::string m = mode;
    if (m == "exact")
      grid->overrides.mode = pansched::PropagationMode::exact;
    else if (m == "linearized")
      grid->overrides.mode = pansched::PropagationMode::linearized;
    else
      throw pansched::Error(pansched::Errc::invalid_argument,
                            "unknown mode '" + m + "' (expected exact or linearized)");
  });
}

ps_status ps_grid_run(const ps_grid* grid, size_t threads, ps_table** out) {
  if (!grid || !out) return fail_invalid("ps_grid_run: null argument");
  return guarded([&] {
    auto h = std::make_unique<ps_table>();
    h->result = pansched::run_grid(grid->grid, grid->overrides, threads);
    *out = h.release();
  });
}

void ps_grid_free(ps_grid* grid) { delete grid; }

size_t ps_table_rows(const ps_table* table) { return table ? table->result.cells.size() : 0; }

int ps_table_row_ok(const ps_table* table, size_t row) {
  if (!table || row >= table->result.cells.size()) return 0;
  return table->result.cells[row].error.empty() ? 1 : 0;
}

ps_status ps_table_write(const ps_table* table, const char* format, const char* path) {
  if (!table || !format) return fail_invalid("ps_table_write: null argument");
  return guarded([&] {
    pansched::ReportFormat fmt = pansched::report_format_from_name(format);
    if (path) {
      pansched::write_report(table->result, fmt, path);
    } else {
      std::cout << pansched::render_report(table->result, fmt) << std::flush;
    }
  });
}

void ps_table_free(ps_table* table) { delete table; }

}  // extern "C"
