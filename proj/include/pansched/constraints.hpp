#pragma once

#include <cstdint>
#include <vector>

#include "pansched/schedule.hpp"

namespace pansched {

// Headcount bound over a member set, enforced on every day of the horizon.
struct GroupBound {
  std::vector<std::size_t> members;
  std::size_t bound = 0;
};

// All feasibility constraints of both models. Sizes are implied by the
// schedule being evaluated; empty per-employee vectors mean "no such
// constraint". Violations are counted per constraint instance: one per
// (group, day) pair and one per employee bound, never by shortfall size.
struct ConstraintSet {
  std::vector<GroupBound> lower_groups;        // sum_{i in C_k} x_i^d >= b_k
  std::vector<GroupBound> upper_groups;        // sum_{i in C_k} x_i^d <= b_k
  std::vector<std::size_t> min_presence_days;  // per employee, size n or empty
  std::vector<std::size_t> test_capacity;      // per employee TC_i, size n or empty

  // Throws on member indices >= n, bounds above group size, or per-employee
  // vectors of the wrong length.
  void validate(std::size_t n) const;

  // Day-major raw columns; t may be null (Model 2: capacity inactive).
  std::size_t violations_raw(std::size_t n, std::size_t days, const std::uint8_t* x,
                             const std::uint8_t* t) const;
};

std::size_t violation_count(const Schedule& sched, const ConstraintSet& cs);
std::size_t violation_count(const Schedule& sched, const TestPlan& tests, const ConstraintSet& cs);

bool is_feasible(const Schedule& sched, const ConstraintSet& cs);
bool is_feasible(const Schedule& sched, const TestPlan& tests, const ConstraintSet& cs);

// Fractional quotas rounded conservatively. Values within 1e-9 of an integer
// snap to it first, so 0.75*20 yields 15 despite binary representation.
std::size_t lower_quota(double fraction, std::size_t count);
std::size_t upper_quota(double fraction, std::size_t count);

// One lower and one upper group over all n employees with bounds
// ceil(min_frac*n) and floor(max_frac*n).
std::pair<GroupBound, GroupBound> build_occupancy_band(std::size_t n, double min_frac, double max_frac);

std::size_t daily_headcount(const Schedule& sched, std::size_t day);

}  // namespace pansched
