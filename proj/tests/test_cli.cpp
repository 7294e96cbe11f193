// End-to-end checks of the installed command-line tool. argv[1] is the CLI
// binary; every case shells out and inspects exit codes, streams, and files.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;
std::string cli;
std::vector<std::string> cleanup;

#define EXPECT(cond)                                                          \
  do {                                                                        \
    if (!(cond)) {                                                            \
      ++failures;                                                             \
      std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);    \
    }                                                                         \
  } while (0)

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  cleanup.push_back(path);
}

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return in.good();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  std::string out_path = "cli_stdout_" + std::to_string(counter) + ".txt";
  std::string err_path = "cli_stderr_" + std::to_string(counter) + ".txt";
  ++counter;
  std::string cmd = cli + " " + args + " > " + out_path + " 2> " + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

const char* kTinyScenario = R"({
  "graph": {"source": "base20", "seed": 7},
  "params": {"horizon": 3},
  "constraints": {"occupancy_band": [0.5, 0.75], "min_presence_days": 1, "test_capacity": 1},
  "strategy": "M1",
  "ga": {"population_size": 32, "max_generations": 40},
  "repetitions": 2,
  "seed": 11
})";

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
    return 1;
  }
  cli = argv[1];

  // ---- version and argument parsing ----
  EXPECT(run("--version").exit_code == 0);
  EXPECT(run("").exit_code == 2);             // a subcommand is required
  EXPECT(run("warp").exit_code == 2);         // unknown subcommand
  EXPECT(run("solve").exit_code == 2);        // --config is required
  EXPECT(run("solve --config x.json --nope").exit_code == 2);

  // ---- solve ----
  write_file("cli_scenario.json", kTinyScenario);
  {
    RunResult r = run("solve --config cli_scenario.json --out cli_solution.json");
    cleanup.push_back("cli_solution.json");
    EXPECT(r.exit_code == 0);
    std::string sol = slurp("cli_solution.json");
    EXPECT(sol.find("\"mean_risk\"") != std::string::npos);
    EXPECT(sol.find("\"schedule\"") != std::string::npos);
    EXPECT(sol.find("\"tests\"") != std::string::npos);
  }
  {
    RunResult r = run("solve --config cli_scenario.json --seed 5 --reps 1 --mode linearized");
    EXPECT(r.exit_code == 0);
    EXPECT(r.out.find("\"mean_risk\"") != std::string::npos);  // stdout by default
  }
  EXPECT(run("solve --config cli_missing.json").exit_code == 2);
  write_file("cli_bad.json", "{ nope");
  EXPECT(run("solve --config cli_bad.json").exit_code == 2);
  EXPECT(run("solve --config cli_scenario.json --mode fuzzy").exit_code == 2);

  // An unsatisfiable instance exits 1. The GA variant still reports its best
  // attempt; the random baseline fails outright while sampling.
  write_file("cli_infeasible.json", R"({
    "graph": {"source": "base20", "seed": 7},
    "params": {"horizon": 1},
    "constraints": {"min_presence_days": 2},
    "strategy": "M1",
    "ga": {"population_size": 16, "max_generations": 6},
    "repetitions": 1
  })");
  {
    RunResult r = run("solve --config cli_infeasible.json --out cli_infeasible_out.json");
    cleanup.push_back("cli_infeasible_out.json");
    EXPECT(r.exit_code == 1);
    EXPECT(r.err.find("no feasible solution found") != std::string::npos);
    EXPECT(slurp("cli_infeasible_out.json").find("\"feasible\": false") != std::string::npos);
  }
  write_file("cli_infeasible_r.json", R"({
    "graph": {"source": "base20", "seed": 7},
    "params": {"horizon": 1},
    "constraints": {"min_presence_days": 2},
    "strategy": "R",
    "ga": {"population_size": 16, "max_generations": 6},
    "repetitions": 1
  })");
  {
    RunResult r = run("solve --config cli_infeasible_r.json");
    EXPECT(r.exit_code == 1);
    EXPECT(r.err.rfind("error: ", 0) == 0);
  }

  // ---- grid ----
  write_file("cli_grid.json", std::string(R"({
    "base": )") + kTinyScenario +
                                  R"(,
    "axes": [{"name": "constraints.test_capacity", "values": [1, 2]}],
    "strategies": ["M2", "M1"]
  })");
  {
    RunResult r = run("grid --config cli_grid.json --reps 1 --threads 1 --out cli_table.csv");
    cleanup.push_back("cli_table.csv");
    EXPECT(r.exit_code == 0);
    std::string table = slurp("cli_table.csv");
    EXPECT(table.rfind("constraints.test_capacity,M2,M1,error\n", 0) == 0);
  }
  {
    RunResult r = run("grid --config cli_grid.json --reps 1 --format markdown");
    EXPECT(r.exit_code == 0);
    EXPECT(r.out.find("| M1 |") != std::string::npos);
  }
  EXPECT(run("grid --config cli_grid.json --reps 1 --format tsv").exit_code == 2);

  // A grid whose only cell cannot be satisfied exits 1 and names the cell.
  write_file("cli_grid_bad.json", R"({
    "base": {
      "graph": {"source": "base20", "seed": 7},
      "params": {"horizon": 1},
      "constraints": {"min_presence_days": 2},
      "ga": {"population_size": 16, "max_generations": 6},
      "repetitions": 1
    },
    "axes": [{"name": "seed", "values": [1]}],
    "strategies": ["M1"]
  })");
  {
    RunResult r = run("grid --config cli_grid_bad.json --threads 1 --out cli_table_bad.csv");
    cleanup.push_back("cli_table_bad.csv");
    EXPECT(r.exit_code == 1);
    EXPECT(r.err.find("cell 0 failed") != std::string::npos);
    EXPECT(slurp("cli_table_bad.csv").find("no feasible solution") != std::string::npos);
  }

  // ---- oracle ----
  write_file("cli_oracle_graph.csv", "0,1,0.5\n1,2,0.25\n");
  write_file("cli_oracle.json", R"({
    "graph": {"source": "edge_list", "path": "cli_oracle_graph.csv"},
    "params": {"horizon": 2},
    "constraints": {"occupancy_band": [0.3, 1.0], "test_capacity": 1},
    "strategy": "M1",
    "repetitions": 1
  })");
  {
    RunResult r = run("oracle --config cli_oracle.json --out cli_optimum.json");
    cleanup.push_back("cli_optimum.json");
    EXPECT(r.exit_code == 0);
    std::string opt = slurp("cli_optimum.json");
    EXPECT(opt.find("\"states_visited\"") != std::string::npos);
    EXPECT(opt.find("\"risk\"") != std::string::npos);
  }
  EXPECT(run("oracle --config cli_oracle.json --budget 1").exit_code == 2);

  // ---- graph gen / ingest ----
  {
    RunResult r = run("graph gen --n 30 --profile sparse --seed 3 --out cli_gen.csv");
    cleanup.push_back("cli_gen.csv");
    cleanup.push_back("cli_gen.csv.meta.json");
    EXPECT(r.exit_code == 0);
    EXPECT(r.err.find("wrote cli_gen.csv (30 employees") != std::string::npos);
    EXPECT(file_exists("cli_gen.csv"));
    EXPECT(file_exists("cli_gen.csv.meta.json"));
  }
  {
    RunResult r = run(
        "graph gen --profile base20 --seed 5 --vaccination-fraction 0.95 "
        "--vaccination-seed 15 --out cli_base.csv");
    cleanup.push_back("cli_base.csv");
    cleanup.push_back("cli_base.csv.meta.json");
    EXPECT(r.exit_code == 0);
    EXPECT(slurp("cli_base.csv.meta.json").find("true") != std::string::npos);
  }
  EXPECT(run("graph gen --n 1 --profile sparse --out cli_tiny.csv").exit_code == 2);
  EXPECT(run("graph gen --n 5 --profile mesh --out cli_mesh.csv").exit_code == 2);
  EXPECT(run("graph gen --n 5 --profile sparse").exit_code == 2);  // --out required

  write_file("cli_log.txt", "1000 100 200\n1100 100 300\n2000 200 300\n");
  {
    RunResult r = run("graph ingest --log cli_log.txt --observation-days 1 --out cli_ingest.csv");
    cleanup.push_back("cli_ingest.csv");
    cleanup.push_back("cli_ingest.csv.meta.json");
    EXPECT(r.exit_code == 0);
    EXPECT(r.err.find("3 employees") != std::string::npos);
    EXPECT(slurp("cli_ingest.csv.meta.json").find("external_ids") != std::string::npos);
  }
  EXPECT(run("graph ingest --log cli_nolog.txt --observation-days 1 --out x.csv").exit_code == 2);

  for (const auto& path : cleanup) std::remove(path.c_str());
  if (failures == 0) std::printf("test_cli: all checks passed\n");
  else std::printf("test_cli: %d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
