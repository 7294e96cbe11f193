#include "pansched/constraints.hpp"

#include <cmath>
#include <set>
#include <string>

#include "pansched/error.hpp"

namespace pansched {

namespace {

void validate_members(const GroupBound& g, std::size_t n, const char* kind) {
  std::set<std::size_t> seen;
  for (std::size_t m : g.members) {
    if (m >= n) {
      throw Error(Errc::invalid_argument, std::string(kind) + " group member " + std::to_string(m) +
                                              " out of range (n=" + std::to_string(n) + ")");
    }
    if (!seen.insert(m).second) {
      throw Error(Errc::invalid_argument,
                  std::string(kind) + " group lists member " + std::to_string(m) + " twice");
    }
  }
}

}  // namespace

void ConstraintSet::validate(std::size_t n) const {
  for (const auto& g : lower_groups) {
    validate_members(g, n, "lower");
    if (g.bound > g.members.size()) {
      throw Error(Errc::invalid_argument, "lower group bound " + std::to_string(g.bound) +
                                              " exceeds member count " + std::to_string(g.members.size()));
    }
  }
  // Upper bounds above the member count are vacuous, not invalid.
  for (const auto& g : upper_groups) validate_members(g, n, "upper");
  if (!min_presence_days.empty() && min_presence_days.size() != n) {
    throw Error(Errc::invalid_argument, "min_presence_days has length " +
                                            std::to_string(min_presence_days.size()) + ", expected " +
                                            std::to_string(n));
  }
  if (!test_capacity.empty() && test_capacity.size() != n) {
    throw Error(Errc::invalid_argument, "test_capacity has length " + std::to_string(test_capacity.size()) +
                                            ", expected " + std::to_string(n));
  }
}

std::size_t ConstraintSet::violations_raw(std::size_t n, std::size_t days, const std::uint8_t* x,
                                          const std::uint8_t* t) const {
  std::size_t count = 0;

  for (std::size_t d = 0; d < days; ++d) {
    const std::uint8_t* col = x + d * n;
    for (const auto& g : lower_groups) {
      std::size_t present = 0;
      for (std::size_t m : g.members) present += col[m];
      if (present < g.bound) ++count;
    }
    for (const auto& g : upper_groups) {
      std::size_t present = 0;
      for (std::size_t m : g.members) present += col[m];
      if (present > g.bound) ++count;
    }
  }

  if (!min_presence_days.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t worked = 0;
      for (std::size_t d = 0; d < days; ++d) worked += x[d * n + i];
      if (worked < min_presence_days[i]) ++count;
    }
  }

  if (t != nullptr && !test_capacity.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t taken = 0;
      for (std::size_t d = 0; d < days; ++d) taken += t[d * n + i];
      if (taken > test_capacity[i]) ++count;
    }
  }

  return count;
}

std::size_t violation_count(const Schedule& sched, const ConstraintSet& cs) {
  cs.validate(sched.n);
  return cs.violations_raw(sched.n, sched.days, sched.on.data(), nullptr);
}

std::size_t violation_count(const Schedule& sched, const TestPlan& tests, const ConstraintSet& cs) {
  cs.validate(sched.n);
  if (tests.n != sched.n || tests.days != sched.days) {
    throw Error(Errc::invalid_argument, "test plan dimensions disagree with schedule");
  }
  return cs.violations_raw(sched.n, sched.days, sched.on.data(), tests.given.data());
}

bool is_feasible(const Schedule& sched, const ConstraintSet& cs) {
  return violation_count(sched, cs) == 0;
}

bool is_feasible(const Schedule& sched, const TestPlan& tests, const ConstraintSet& cs) {
  return violation_count(sched, tests, cs) == 0;
}

namespace {

// round(0.75*20) style products pick up one-ulp noise; snap before rounding
// so exact fractions behave as written.
double snap_integer(double v) {
  double nearest = std::round(v);
  return std::abs(v - nearest) <= 1e-9 ? nearest : v;
}

}  // namespace

std::size_t lower_quota(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::ceil(snap_integer(fraction * static_cast<double>(count))));
}

std::size_t upper_quota(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::floor(snap_integer(fraction * static_cast<double>(count))));
}

std::pair<GroupBound, GroupBound> build_occupancy_band(std::size_t n, double min_frac, double max_frac) {
  if (!(0.0 <= min_frac && min_frac <= max_frac && max_frac <= 1.0)) {
    throw Error(Errc::invalid_argument, "occupancy band requires 0 <= min_frac <= max_frac <= 1");
  }
  GroupBound lower, upper;
  lower.members.resize(n);
  for (std::size_t i = 0; i < n; ++i) lower.members[i] = i;
  upper.members = lower.members;
  lower.bound = lower_quota(min_frac, n);
  upper.bound = upper_quota(max_frac, n);
  return {lower, upper};
}

std::size_t daily_headcount(const Schedule& sched, std::size_t day) {
  if (day >= sched.days) throw Error(Errc::invalid_argument, "day out of range");
  return sched.headcount(day);
}

}  // namespace pansched
