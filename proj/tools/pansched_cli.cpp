// Command-line front end. Talks to the library exclusively through the C API.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pansched.h"

namespace {

struct ScenarioDel {
  void operator()(ps_scenario* p) const { ps_scenario_free(p); }
};
struct ResultDel {
  void operator()(ps_result* p) const { ps_result_free(p); }
};
struct GridDel {
  void operator()(ps_grid* p) const { ps_grid_free(p); }
};
struct TableDel {
  void operator()(ps_table* p) const { ps_table_free(p); }
};
struct GraphDel {
  void operator()(ps_graph* p) const { ps_graph_free(p); }
};

using ScenarioPtr = std::unique_ptr<ps_scenario, ScenarioDel>;
using ResultPtr = std::unique_ptr<ps_result, ResultDel>;
using GridPtr = std::unique_ptr<ps_grid, GridDel>;
using TablePtr = std::unique_ptr<ps_table, TableDel>;
using GraphPtr = std::unique_ptr<ps_graph, GraphDel>;

// 0 success, 1 infeasible, 2 everything else (config, parse, io, budget).
int exit_for(ps_status st) {
  if (st == PS_OK) return 0;
  if (st == PS_ERR_INFEASIBLE) return 1;
  return 2;
}

int report_failure(ps_status st) {
  std::fprintf(stderr, "error: %s\n", ps_last_error());
  return exit_for(st);
}

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t reps = 0;
  bool reps_set = false;
  std::string mode;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_reps) {
  cmd->add_option("--config", o.config, "scenario config (JSON)")->required();
  cmd->add_option("--seed", o.seed, "override the base seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  if (with_reps) {
    cmd->add_option("--reps", o.reps, "override the repetition count")
        ->each([&](const std::string&) { o.reps_set = true; });
  }
  cmd->add_option("--mode", o.mode, "propagation mode (exact|linearized)");
  cmd->add_option("--out", o.out, "output path (default: stdout)");
}

int apply_scenario_overrides(ps_scenario* sc, const CommonOpts& o) {
  if (o.seed_set) {
    if (ps_status st = ps_scenario_set_seed(sc, o.seed); st != PS_OK) return report_failure(st);
  }
  if (o.reps_set) {
    if (ps_status st = ps_scenario_set_repetitions(sc, o.reps); st != PS_OK)
      return report_failure(st);
  }
  if (!o.mode.empty()) {
    if (ps_status st = ps_scenario_set_mode(sc, o.mode.c_str()); st != PS_OK)
      return report_failure(st);
  }
  return -1;  // no failure
}

int cmd_solve(const CommonOpts& o) {
  ps_scenario* raw = nullptr;
  if (ps_status st = ps_scenario_load(o.config.c_str(), &raw); st != PS_OK)
    return report_failure(st);
  ScenarioPtr sc(raw);
  if (int rc = apply_scenario_overrides(sc.get(), o); rc >= 0) return rc;

  ps_result* res_raw = nullptr;
  if (ps_status st = ps_scenario_run(sc.get(), &res_raw); st != PS_OK) return report_failure(st);
  ResultPtr res(res_raw);

  if (ps_status st = ps_result_write_json(res.get(), o.out.empty() ? nullptr : o.out.c_str());
      st != PS_OK)
    return report_failure(st);
  if (!ps_result_feasible(res.get())) {
    std::fprintf(stderr, "no feasible solution found\n");
    return 1;
  }
  return 0;
}

int cmd_oracle(const CommonOpts& o, std::uint64_t budget) {
  ps_scenario* raw = nullptr;
  if (ps_status st = ps_scenario_load(o.config.c_str(), &raw); st != PS_OK)
    return report_failure(st);
  ScenarioPtr sc(raw);
  if (int rc = apply_scenario_overrides(sc.get(), o); rc >= 0) return rc;

  ps_result* res_raw = nullptr;
  if (ps_status st = ps_scenario_run_oracle(sc.get(), budget, &res_raw); st != PS_OK)
    return report_failure(st);
  ResultPtr res(res_raw);

  if (ps_status st = ps_result_write_json(res.get(), o.out.empty() ? nullptr : o.out.c_str());
      st != PS_OK)
    return report_failure(st);
  return 0;
}

int cmd_grid(const CommonOpts& o, const std::string& format, std::size_t threads) {
  ps_grid* raw = nullptr;
  if (ps_status st = ps_grid_load(o.config.c_str(), &raw); st != PS_OK) return report_failure(st);
  GridPtr grid(raw);
  if (o.seed_set) {
    if (ps_status st = ps_grid_set_seed(grid.get(), o.seed); st != PS_OK)
      return report_failure(st);
  }
  if (o.reps_set) {
    if (ps_status st = ps_grid_set_repetitions(grid.get(), o.reps); st != PS_OK)
      return report_failure(st);
  }
  if (!o.mode.empty()) {
    if (ps_status st = ps_grid_set_mode(grid.get(), o.mode.c_str()); st != PS_OK)
      return report_failure(st);
  }

  ps_table* table_raw = nullptr;
  if (ps_status st = ps_grid_run(grid.get(), threads, &table_raw); st != PS_OK)
    return report_failure(st);
  TablePtr table(table_raw);

  if (ps_status st =
          ps_table_write(table.get(), format.c_str(), o.out.empty() ? nullptr : o.out.c_str());
      st != PS_OK)
    return report_failure(st);

  for (std::size_t r = 0; r < ps_table_rows(table.get()); ++r) {
    if (!ps_table_row_ok(table.get(), r)) {
      std::fprintf(stderr, "cell %zu failed; see the error column\n", r);
      return 1;
    }
  }
  return 0;
}

struct VaccinationOpts {
  double fraction = -1.0;
  std::uint64_t seed = 1;
};

int finish_graph(ps_graph* graph_raw, const VaccinationOpts& vac, const std::string& out) {
  GraphPtr graph(graph_raw);
  if (vac.fraction >= 0.0) {
    if (ps_status st = ps_graph_assign_vaccination(graph.get(), vac.fraction, vac.seed);
        st != PS_OK)
      return report_failure(st);
  }
  if (ps_status st = ps_graph_save(graph.get(), out.c_str()); st != PS_OK)
    return report_failure(st);
  std::fprintf(stderr, "wrote %s (%zu employees, %zu edges)\n", out.c_str(),
               ps_graph_employees(graph.get()), ps_graph_edges(graph.get()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COVID-aware personnel scheduling"};
  app.set_version_flag("--version", ps_version());
  app.require_subcommand(1);

  CommonOpts solve_opts;
  CLI::App* solve = app.add_subcommand("solve", "run one scenario with its GA strategy");
  add_common(solve, solve_opts, true);

  CommonOpts grid_opts;
  std::string grid_format = "csv";
  std::size_t grid_threads = 0;
  CLI::App* grid = app.add_subcommand("grid", "run a scenario grid and render the report");
  add_common(grid, grid_opts, true);
  grid->add_option("--format", grid_format, "report format (csv|markdown)");
  grid->add_option("--threads", grid_threads, "worker threads (0 = all cores)");

  CommonOpts oracle_opts;
  std::uint64_t oracle_budget = 0;
  CLI::App* oracle = app.add_subcommand("oracle", "exhaustively solve a small scenario");
  add_common(oracle, oracle_opts, false);
  oracle->add_option("--budget", oracle_budget, "state budget (0 = default)");

  CLI::App* graph = app.add_subcommand("graph", "contact graph utilities");
  graph->require_subcommand(1);

  std::size_t gen_n = 0;
  std::string gen_profile = "sparse";
  std::uint64_t gen_seed = 1;
  VaccinationOpts gen_vac;
  std::string gen_out;
  CLI::App* gen = graph->add_subcommand("gen", "generate a seeded random graph");
  gen->add_option("--n", gen_n, "employee count (ignored for base20)");
  gen->add_option("--profile", gen_profile, "sparse|dense|base20");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--vaccination-fraction", gen_vac.fraction, "fraction vaccinated");
  gen->add_option("--vaccination-seed", gen_vac.seed, "vaccination assignment seed");
  gen->add_option("--out", gen_out, "edge list output path")->required();

  std::string ingest_log;
  std::size_t ingest_days = 0;
  VaccinationOpts ingest_vac;
  std::string ingest_out;
  CLI::App* ingest = graph->add_subcommand("ingest", "build a graph from an interaction log");
  ingest->add_option("--log", ingest_log, "interaction log path")->required();
  ingest->add_option("--observation-days", ingest_days, "days the log covers")->required();
  ingest->add_option("--vaccination-fraction", ingest_vac.fraction, "fraction vaccinated");
  ingest->add_option("--vaccination-seed", ingest_vac.seed, "vaccination assignment seed");
  ingest->add_option("--out", ingest_out, "edge list output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (solve->parsed()) return cmd_solve(solve_opts);
  if (grid->parsed()) return cmd_grid(grid_opts, grid_format, grid_threads);
  if (oracle->parsed()) return cmd_oracle(oracle_opts, oracle_budget);
  if (gen->parsed()) {
    ps_graph* g = nullptr;
    ps_status st;
    if (gen_profile == "base20") {
      st = ps_graph_base20(gen_seed, &g);
    } else {
      st = ps_graph_random(gen_n, gen_profile.c_str(), gen_seed, &g);
    }
    if (st != PS_OK) return report_failure(st);
    return finish_graph(g, gen_vac, gen_out);
  }
  if (ingest->parsed()) {
    ps_graph* g = nullptr;
    if (ps_status st = ps_graph_from_interaction_log(ingest_log.c_str(), ingest_days, &g);
        st != PS_OK)
      return report_failure(st);
    return finish_graph(g, ingest_vac, ingest_out);
  }
  return 2;
}
