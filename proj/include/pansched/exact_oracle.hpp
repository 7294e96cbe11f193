#pragma once

#include <cstdint>

#include "pansched/constraints.hpp"
#include "pansched/ga_solver.hpp"

namespace pansched {

struct OracleBudget {
  std::uint64_t max_states = std::uint64_t{1} << 26;
};

struct OracleResult {
  Schedule schedule;
  TestPlan tests;  // Model 1 only
  bool has_tests = false;
  double risk = 0.0;
  std::uint64_t states_visited = 0;  // day-column expansions performed
  std::uint64_t leaves = 0;          // complete feasible assignments reached
};

// Exhaustive day-by-day enumeration of every feasible assignment, for
// desk-scale ground truth. Refuses up front when a conservative estimate of
// the pruned search space (feasible day columns ^ D, times the per-employee
// test-pattern counts for Model 1) exceeds the budget. The trajectory math
// routes through the same Propagator kernels as the GA fitness, so oracle and
// GA risks are directly comparable, and ties are broken toward the
// lexicographically smallest flat gene string (presence block then test
// block, day-major).
//
// Throws Error(budget_exceeded) on refusal and Error(infeasible) when no
// feasible assignment exists.
OracleResult enumerate_optimum(const ContactGraph& graph, const EpidemicParams& params,
                               const ConstraintSet& cs, Model model, double pr_test = 0.0,
                               PropagationMode mode = PropagationMode::exact,
                               const OracleBudget& budget = {});

// Number of feasible presence matrices (tests not enumerated).
std::uint64_t enumerate_feasible_count(const ConstraintSet& cs, std::size_t n, std::size_t days,
                                       const OracleBudget& budget = {});

}  // namespace pansched
