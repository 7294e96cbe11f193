#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pansched/constraints.hpp"
#include "pansched/contact_graph.hpp"
#include "pansched/exact_oracle.hpp"
#include "pansched/ga_solver.hpp"
#include "pansched/infection_model.hpp"

namespace pansched {

// The three strategies compared throughout the result tables: a random
// feasible baseline, the presence-only model under a random testing
// probability, and the joint presence+testing model.
enum class Strategy { baseline, m2, m1 };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);  // "R" | "M2" | "M1"

struct GraphSpec {
  enum class Source { edge_list, interactions, random, base20 };
  Source source = Source::random;
  std::string path;        // edge_list / interactions
  std::size_t n = 0;       // random
  RandomGraphKind profile = RandomGraphKind::sparse;
  std::uint64_t seed = 1;  // random / base20
  std::size_t observation_days = 0;  // interactions; 0 = distinct days in log
};

struct VaccinationSpec {
  bool enabled = false;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// Constraint description as written in configs; build() turns fractions into
// integer bounds for a concrete n.
struct ConstraintSpec {
  double band_min = -1.0;  // occupancy band; negative = absent
  double band_max = -1.0;

  struct SectionMin {
    std::vector<std::size_t> members;
    double fraction = -1.0;  // either a fraction of the section...
    std::size_t bound = 0;   // ...or an absolute bound
  };
  std::vector<SectionMin> section_minima;

  std::size_t min_presence_days = 0;  // uniform per-employee floor; 0 = none
  long test_capacity = -1;            // uniform TC; negative = none
  double pr_test = -1.0;              // negative = derive as TC / horizon

  ConstraintSet build(std::size_t n) const;
  // pr(test) actually used by Model 2 and the pr-based baseline.
  double resolve_pr(std::size_t horizon) const;
  bool has_test_budget() const { return test_capacity >= 0; }
};

struct ScenarioConfig {
  GraphSpec graph;
  VaccinationSpec vaccination;
  EpidemicParams params;
  PropagationMode mode = PropagationMode::exact;
  ConstraintSpec constraints;
  Strategy strategy = Strategy::m1;
  GaConfig ga;
  std::size_t repetitions = 30;
  std::uint64_t seed = 0;  // repetition r runs with seed + r
};

ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig load_scenario_string(const std::string& text);

// Synthetic 20-employee office: sections {0..11} and {12..19}, denser contact
// inside a section than across. Stands in for the paper-style base case whose
// exact weights are not published.
ContactGraph base_case_graph(std::uint64_t seed);
ConstraintSet base_case_constraints();

// Graph construction per GraphSpec. Edge-list sources pick up vaccination
// flags from the export sidecar when present; an explicit VaccinationSpec
// overrides them.
ContactGraph build_graph(const GraphSpec& spec, const VaccinationSpec& vac);

struct RepOutcome {
  double risk = 0.0;
  bool feasible = false;
  std::size_t violations = 0;
  Schedule schedule;
  TestPlan tests;
  bool has_tests = false;
};

struct ScenarioResult {
  std::vector<double> risks;  // one per repetition
  double mean_risk = 0.0;
  bool feasible = false;  // every repetition produced a feasible solution
  RepOutcome best;        // lowest-risk feasible repetition
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// One grid axis: a dotted path into the scenario config object and the values
// it sweeps, e.g. {"constraints.test_capacity", [1,2,3]}.
struct GridAxis {
  std::string name;
  std::vector<nlohmann::json> values;
};

struct GridConfig {
  nlohmann::json base;  // scenario config object (strategy ignored)
  std::vector<GridAxis> axes;
  std::vector<Strategy> strategies = {Strategy::baseline, Strategy::m2, Strategy::m1};
};

GridConfig load_grid_file(const std::string& path);
GridConfig load_grid_string(const std::string& text);

// CLI-level overrides applied on top of every cell's config.
struct GridOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repetitions;
  std::optional<PropagationMode> mode;
};

struct GridCell {
  std::vector<std::pair<std::string, std::string>> coords;  // axis name, value
  std::vector<double> mean_risk;  // per strategy, grid order
  std::string error;              // nonempty: cell failed, means invalid
};

struct GridResult {
  std::vector<Strategy> strategies;
  std::vector<GridCell> cells;
};

// Runs every (cell, strategy, repetition) job on a small worker pool.
// Per-job seeds depend only on the cell config and repetition index, so the
// outcome is identical for any pool size. threads = 0 picks the hardware
// concurrency. Per-cell errors are recorded in the cell, not thrown.
GridResult run_grid(const GridConfig& grid, const GridOverrides& overrides = {},
                    std::size_t threads = 0);

enum class ReportFormat { csv, markdown };
ReportFormat report_format_from_name(const std::string& name);

// Table with one row per cell: axis coordinates, R/M2/M1 risks scaled by 1e5
// (two decimals), and reduction percentages vs the baseline.
std::string render_report(const GridResult& result, ReportFormat format);
void write_report(const GridResult& result, ReportFormat format, const std::string& path);

// Solution/result serialization used by the CLI (schedule as n rows of D
// bits, employee-major like the published strategy tables).
nlohmann::json scenario_result_to_json(const ScenarioResult& result, Strategy strategy);
nlohmann::json oracle_result_to_json(const OracleResult& result);

}  // namespace pansched
