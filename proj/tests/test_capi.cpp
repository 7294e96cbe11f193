#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <pansched.h>

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p, const std::string& content = {}) : path(std::move(p)) {
    if (!content.empty()) {
      std::ofstream out(path);
      out << content;
    }
  }
  ~TempFile() {
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct GraphHandle {
  ps_graph* g = nullptr;
  ~GraphHandle() { ps_graph_free(g); }
};
struct ScenarioHandle {
  ps_scenario* s = nullptr;
  ~ScenarioHandle() { ps_scenario_free(s); }
};
struct ResultHandle {
  ps_result* r = nullptr;
  ~ResultHandle() { ps_result_free(r); }
};
struct GridHandle {
  ps_grid* g = nullptr;
  ~GridHandle() { ps_grid_free(g); }
};
struct TableHandle {
  ps_table* t = nullptr;
  ~TableHandle() { ps_table_free(t); }
};

const char* kTinyScenario = R"({
  "graph": {"source": "base20", "seed": 7},
  "params": {"horizon": 3},
  "constraints": {"occupancy_band": [0.5, 0.75], "min_presence_days": 1, "test_capacity": 1},
  "strategy": "M1",
  "ga": {"population_size": 32, "max_generations": 40},
  "repetitions": 2,
  "seed": 11
})";

// Three employees, two days: small enough for the oracle.
const char* kOracleScenarioFmt = R"({
  "graph": {"source": "edge_list", "path": "%s"},
  "params": {"horizon": 2},
  "constraints": {"occupancy_band": [0.3, 1.0], "test_capacity": 1},
  "strategy": "%s",
  "ga": {"population_size": 16, "max_generations": 10},
  "repetitions": 1
})";

std::string oracle_scenario(const std::string& graph_path, const char* strategy) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), kOracleScenarioFmt, graph_path.c_str(), strategy);
  return buf;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  REQUIRE(ps_version() != nullptr);
  CHECK(std::strlen(ps_version()) > 0);
  REQUIRE(ps_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected without touching the out-parameter") {
  ps_graph* sentinel = reinterpret_cast<ps_graph*>(0x1);
  ps_graph* out = sentinel;
  CHECK(ps_graph_load_edge_list(nullptr, 0, &out) == PS_ERR_INVALID_ARGUMENT);
  CHECK(out == sentinel);
  CHECK(std::strlen(ps_last_error()) > 0);

  CHECK(ps_graph_load_edge_list("x.csv", 0, nullptr) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_graph_random(5, nullptr, 1, &out) == PS_ERR_INVALID_ARGUMENT);
  CHECK(out == sentinel);
  CHECK(ps_graph_assign_vaccination(nullptr, 0.5, 1) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_graph_save(nullptr, "x.csv") == PS_ERR_INVALID_ARGUMENT);

  ps_scenario* sc = nullptr;
  CHECK(ps_scenario_load_string(nullptr, &sc) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_scenario_set_seed(nullptr, 1) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_scenario_run(nullptr, nullptr) == PS_ERR_INVALID_ARGUMENT);

  ps_grid* gr = nullptr;
  CHECK(ps_grid_load_string(nullptr, &gr) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_grid_run(nullptr, 1, nullptr) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_result_write_json(nullptr, nullptr) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_table_write(nullptr, "csv", nullptr) == PS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("frees accept NULL") {
  ps_graph_free(nullptr);
  ps_scenario_free(nullptr);
  ps_result_free(nullptr);
  ps_grid_free(nullptr);
  ps_table_free(nullptr);
}

TEST_CASE("random graph generation and accessors") {
  GraphHandle h;
  REQUIRE(ps_graph_random(30, "sparse", 9, &h.g) == PS_OK);
  CHECK(ps_graph_employees(h.g) == 30);
  CHECK(ps_graph_edges(h.g) > 0);

  double p = ps_graph_contact(h.g, 0, 1);
  CHECK((p == 0.0 || p == 0.5 || p == 1.0));
  CHECK(ps_graph_contact(h.g, 0, 1) == ps_graph_contact(h.g, 1, 0));
  CHECK(std::isnan(ps_graph_contact(h.g, 0, 99)));
  CHECK(ps_graph_vaccinated(h.g, 0) == 0);
  CHECK(ps_graph_vaccinated(h.g, 99) == -1);
  std::int64_t id = 0;
  CHECK(ps_graph_external_id(h.g, 0, &id) == 0);  // generators carry no ids

  GraphHandle again;
  REQUIRE(ps_graph_random(30, "sparse", 9, &again.g) == PS_OK);
  bool same = true;
  for (size_t i = 0; i < 30; ++i)
    for (size_t j = 0; j < 30; ++j)
      same = same && ps_graph_contact(h.g, i, j) == ps_graph_contact(again.g, i, j);
  CHECK(same);

  ps_graph* out = nullptr;
  CHECK(ps_graph_random(1, "sparse", 9, &out) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_graph_random(5, "mesh", 9, &out) == PS_ERR_INVALID_ARGUMENT);
  CHECK(out == nullptr);
}

TEST_CASE("base-case graph and vaccination assignment") {
  GraphHandle h;
  REQUIRE(ps_graph_base20(15, &h.g) == PS_OK);
  REQUIRE(ps_graph_employees(h.g) == 20);

  REQUIRE(ps_graph_assign_vaccination(h.g, 0.95, 15) == PS_OK);
  int count = 0;
  for (size_t i = 0; i < 20; ++i) count += ps_graph_vaccinated(h.g, i);
  CHECK(count == 19);

  CHECK(ps_graph_assign_vaccination(h.g, 1.5, 15) == PS_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(ps_last_error()) > 0);
}

TEST_CASE("interaction logs come back with external ids") {
  TempFile log("capi_log.txt", "1000 100 200\n1100 100 300\n2000 200 300\n");
  GraphHandle h;
  REQUIRE(ps_graph_from_interaction_log(log.path.c_str(), 1, &h.g) == PS_OK);
  REQUIRE(ps_graph_employees(h.g) == 3);
  std::int64_t id = 0;
  REQUIRE(ps_graph_external_id(h.g, 0, &id) == 1);
  CHECK(id == 100);
  REQUIRE(ps_graph_external_id(h.g, 2, &id) == 1);
  CHECK(id == 300);
  CHECK(ps_graph_external_id(h.g, 3, &id) == 0);
  CHECK(ps_graph_contact(h.g, 0, 1) == 1.0);

  ps_graph* out = nullptr;
  CHECK(ps_graph_from_interaction_log("no_such_log.txt", 1, &out) == PS_ERR_IO);
  CHECK(out == nullptr);
}

TEST_CASE("save and load round-trips through the sidecar") {
  GraphHandle h;
  REQUIRE(ps_graph_base20(3, &h.g) == PS_OK);
  REQUIRE(ps_graph_assign_vaccination(h.g, 0.25, 8) == PS_OK);

  TempFile f("capi_roundtrip.csv");
  REQUIRE(ps_graph_save(h.g, f.path.c_str()) == PS_OK);

  GraphHandle back;
  REQUIRE(ps_graph_load_edge_list(f.path.c_str(), 0, &back.g) == PS_OK);
  REQUIRE(ps_graph_employees(back.g) == 20);
  bool same = true;
  int vaccinated = 0;
  for (size_t i = 0; i < 20; ++i) {
    vaccinated += ps_graph_vaccinated(back.g, i);
    for (size_t j = 0; j < 20; ++j)
      same = same && ps_graph_contact(h.g, i, j) == ps_graph_contact(back.g, i, j);
  }
  CHECK(same);
  CHECK(vaccinated == 5);

  ps_graph* out = nullptr;
  CHECK(ps_graph_load_edge_list("no_such_graph.csv", 0, &out) == PS_ERR_IO);
  CHECK(out == nullptr);
}

TEST_CASE("scenario lifecycle against the base case") {
  ScenarioHandle sc;
  REQUIRE(ps_scenario_load_string(kTinyScenario, &sc.s) == PS_OK);
  REQUIRE(ps_scenario_set_seed(sc.s, 21) == PS_OK);
  REQUIRE(ps_scenario_set_repetitions(sc.s, 2) == PS_OK);
  REQUIRE(ps_scenario_set_mode(sc.s, "exact") == PS_OK);
  REQUIRE(ps_scenario_set_strategy(sc.s, "M1") == PS_OK);

  ResultHandle res;
  REQUIRE(ps_scenario_run(sc.s, &res.r) == PS_OK);
  CHECK(ps_result_feasible(res.r) == 1);
  CHECK(ps_result_repetitions(res.r) == 2);
  double mean = ps_result_mean_risk(res.r);
  CHECK(mean > 0.0);
  CHECK(mean < 1.0);
  CHECK(mean == (ps_result_risk(res.r, 0) + ps_result_risk(res.r, 1)) / 2.0);
  CHECK(std::isnan(ps_result_risk(res.r, 2)));
  CHECK(ps_result_employees(res.r) == 20);
  CHECK(ps_result_days(res.r) == 3);
  CHECK(ps_result_has_tests(res.r) == 1);
  int p = ps_result_present(res.r, 0, 0);
  CHECK((p == 0 || p == 1));
  CHECK(ps_result_present(res.r, 20, 0) == -1);
  CHECK(ps_result_present(res.r, 0, 3) == -1);
  int t = ps_result_tested(res.r, 0, 0);
  CHECK((t == 0 || t == 1));
  CHECK(ps_result_tested(res.r, 20, 0) == -1);
  CHECK(ps_result_states_visited(res.r) == 0);  // GA runs never enumerate

  TempFile out("capi_result.json");
  REQUIRE(ps_result_write_json(res.r, out.path.c_str()) == PS_OK);
  std::string text = slurp(out.path);
  CHECK(text.find("\"mean_risk\"") != std::string::npos);
  CHECK(text.find("\"schedule\"") != std::string::npos);
  CHECK(ps_result_write_json(res.r, "no_dir/out.json") == PS_ERR_IO);

  SUBCASE("setter validation") {
    CHECK(ps_scenario_set_repetitions(sc.s, 0) == PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_scenario_set_mode(sc.s, "fuzzy") == PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_scenario_set_strategy(sc.s, "M3") == PS_ERR_PARSE);
  }
  SUBCASE("a second run under the same seed reproduces the risks") {
    ResultHandle res2;
    REQUIRE(ps_scenario_run(sc.s, &res2.r) == PS_OK);
    CHECK(ps_result_risk(res.r, 0) == ps_result_risk(res2.r, 0));
    CHECK(ps_result_risk(res.r, 1) == ps_result_risk(res2.r, 1));
  }
}

TEST_CASE("scenario parse and io failures") {
  ps_scenario* out = nullptr;
  CHECK(ps_scenario_load_string("{ nope", &out) == PS_ERR_PARSE);
  CHECK(ps_scenario_load_string(R"({"graph": {"source": "base20"}, "x": 1})", &out) == PS_ERR_PARSE);
  CHECK(ps_scenario_load("missing_config.json", &out) == PS_ERR_IO);
  CHECK(out == nullptr);
}

TEST_CASE("an impossible constraint set is infeasible, not a crash") {
  // One day of horizon cannot carry two minimum presence days.
  const char* text = R"({
    "graph": {"source": "base20", "seed": 7},
    "params": {"horizon": 1},
    "constraints": {"min_presence_days": 2},
    "strategy": "R",
    "ga": {"population_size": 16, "max_generations": 6},
    "repetitions": 1
  })";
  ScenarioHandle sc;
  REQUIRE(ps_scenario_load_string(text, &sc.s) == PS_OK);
  ps_result* out = nullptr;
  CHECK(ps_scenario_run(sc.s, &out) == PS_ERR_INFEASIBLE);
  CHECK(out == nullptr);
  CHECK(std::strlen(ps_last_error()) > 0);
}

TEST_CASE("oracle runs through the scenario handle") {
  TempFile graph("capi_oracle_graph.csv", "0,1,0.5\n1,2,0.25\n");
  std::string text = oracle_scenario(graph.path, "M2");
  ScenarioHandle sc;
  REQUIRE(ps_scenario_load_string(text.c_str(), &sc.s) == PS_OK);

  ResultHandle res;
  REQUIRE(ps_scenario_run_oracle(sc.s, 0, &res.r) == PS_OK);
  CHECK(ps_result_employees(res.r) == 3);
  CHECK(ps_result_days(res.r) == 2);
  CHECK(ps_result_feasible(res.r) == 1);
  CHECK(ps_result_repetitions(res.r) == 1);
  CHECK(ps_result_mean_risk(res.r) > 0.0);
  CHECK(ps_result_states_visited(res.r) > 0);
  CHECK(ps_result_has_tests(res.r) == 0);

  SUBCASE("model 1 oracle carries a test plan") {
    std::string m1 = oracle_scenario(graph.path, "M1");
    ScenarioHandle sc1;
    REQUIRE(ps_scenario_load_string(m1.c_str(), &sc1.s) == PS_OK);
    ResultHandle r1;
    REQUIRE(ps_scenario_run_oracle(sc1.s, 0, &r1.r) == PS_OK);
    CHECK(ps_result_has_tests(r1.r) == 1);
    int t = ps_result_tested(r1.r, 0, 0);
    CHECK((t == 0 || t == 1));
    // The GA can only match or exceed the exhaustive optimum.
    ResultHandle ga;
    REQUIRE(ps_scenario_run(sc1.s, &ga.r) == PS_OK);
    REQUIRE(ps_result_feasible(ga.r) == 1);
    CHECK(ps_result_mean_risk(ga.r) >= ps_result_mean_risk(r1.r));
  }
  SUBCASE("tiny budgets are refused") {
    ps_result* out = nullptr;
    CHECK(ps_scenario_run_oracle(sc.s, 1, &out) == PS_ERR_BUDGET);
    CHECK(out == nullptr);
  }
  SUBCASE("the baseline strategy has no oracle") {
    REQUIRE(ps_scenario_set_strategy(sc.s, "R") == PS_OK);
    ps_result* out = nullptr;
    CHECK(ps_scenario_run_oracle(sc.s, 0, &out) == PS_ERR_INVALID_ARGUMENT);
    CHECK(out == nullptr);
  }
}

TEST_CASE("grid lifecycle") {
  std::string text = std::string(R"({
    "base": )") + kTinyScenario +
                     R"(,
    "axes": [{"name": "constraints.test_capacity", "values": [1, 2]}],
    "strategies": ["M2", "M1"]
  })";
  GridHandle grid;
  REQUIRE(ps_grid_load_string(text.c_str(), &grid.g) == PS_OK);
  REQUIRE(ps_grid_set_seed(grid.g, 5) == PS_OK);
  REQUIRE(ps_grid_set_repetitions(grid.g, 1) == PS_OK);
  REQUIRE(ps_grid_set_mode(grid.g, "exact") == PS_OK);

  TableHandle table;
  REQUIRE(ps_grid_run(grid.g, 1, &table.t) == PS_OK);
  REQUIRE(ps_table_rows(table.t) == 2);
  CHECK(ps_table_row_ok(table.t, 0) == 1);
  CHECK(ps_table_row_ok(table.t, 1) == 1);
  CHECK(ps_table_row_ok(table.t, 2) == 0);  // out of range

  TempFile csv("capi_table.csv");
  REQUIRE(ps_table_write(table.t, "csv", csv.path.c_str()) == PS_OK);
  std::string rendered = slurp(csv.path);
  CHECK(rendered.rfind("constraints.test_capacity,M2,M1,error\n", 0) == 0);

  TempFile md("capi_table.md");
  REQUIRE(ps_table_write(table.t, "markdown", md.path.c_str()) == PS_OK);
  CHECK(slurp(md.path).find("| M1 |") != std::string::npos);

  CHECK(ps_table_write(table.t, "tsv", nullptr) == PS_ERR_PARSE);
  CHECK(ps_table_write(table.t, "csv", "no_dir/table.csv") == PS_ERR_IO);

  SUBCASE("grid parse failures") {
    ps_grid* out = nullptr;
    CHECK(ps_grid_load_string("{ nope", &out) == PS_ERR_PARSE);
    CHECK(ps_grid_load("missing_grid.json", &out) == PS_ERR_IO);
    CHECK(ps_grid_set_repetitions(grid.g, 0) == PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_grid_set_mode(grid.g, "fuzzy") == PS_ERR_INVALID_ARGUMENT);
    CHECK(out == nullptr);
  }
}
