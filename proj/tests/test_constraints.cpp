#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "pansched/constraints.hpp"
#include "pansched/error.hpp"
#include "pansched/schedule.hpp"

using namespace pansched;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return Errc::invalid_argument;
}

std::vector<std::size_t> range_members(std::size_t from, std::size_t to) {
  std::vector<std::size_t> m(to - from);
  std::iota(m.begin(), m.end(), from);
  return m;
}

// Published base-case presence strategy: 20 employees (rows) over
// Monday..Friday, 1 = on-site. Week risk 4.61e-5 under pr(test) = 0.4.
constexpr std::array<std::array<int, 5>, 20> kPublishedSchedule = {{
    {1, 0, 1, 1, 0}, {1, 0, 1, 1, 0}, {0, 1, 0, 0, 1}, {1, 0, 0, 0, 1},
    {0, 1, 0, 0, 1}, {0, 1, 0, 0, 1}, {0, 1, 1, 1, 0}, {1, 0, 0, 1, 1},
    {1, 0, 1, 1, 0}, {0, 1, 1, 1, 0}, {1, 0, 1, 1, 0}, {0, 1, 0, 0, 1},
    {1, 0, 0, 0, 1}, {0, 1, 1, 1, 0}, {0, 0, 1, 1, 0}, {1, 1, 1, 0, 0},
    {1, 0, 1, 1, 0}, {0, 1, 0, 0, 1}, {0, 1, 0, 0, 1}, {1, 0, 0, 0, 1},
}};

Schedule published_schedule() {
  Schedule s(20, 5);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t d = 0; d < 5; ++d) s.set_present(i, d, kPublishedSchedule[i][d] != 0);
  return s;
}

// The base-case rule set: occupancy 50-75% of 20, at least 30% of each
// section on-site daily, everyone on-site at least twice a week, two tests
// per employee per week.
ConstraintSet base_rules() {
  ConstraintSet cs;
  auto [lo, hi] = build_occupancy_band(20, 0.5, 0.75);
  cs.lower_groups.push_back(lo);
  cs.upper_groups.push_back(hi);
  cs.lower_groups.push_back({range_members(0, 12), lower_quota(0.3, 12)});
  cs.lower_groups.push_back({range_members(12, 20), lower_quota(0.3, 8)});
  cs.min_presence_days.assign(20, 2);
  cs.test_capacity.assign(20, 2);
  return cs;
}

}  // namespace

TEST_CASE("quota rounding is conservative with an integer snap") {
  CHECK(lower_quota(0.5, 20) == 10);
  CHECK(upper_quota(0.75, 20) == 15);
  CHECK(lower_quota(0.3, 12) == 4);  // ceil(3.6)
  CHECK(lower_quota(0.3, 8) == 3);   // ceil(2.4)
  CHECK(upper_quota(0.3, 12) == 3);  // floor(3.6)
  // 0.28 * 25 lands at 7.000000000000001; the snap keeps the quota at 7.
  CHECK(lower_quota(0.28, 25) == 7);
  // 0.58 * 50 lands at 28.999999999999996; the snap lifts the cap to 29.
  CHECK(upper_quota(0.58, 50) == 29);
  CHECK(lower_quota(0.0, 9) == 0);
  CHECK(upper_quota(1.0, 9) == 9);
}

TEST_CASE("build_occupancy_band produces the published bounds") {
  auto [lo, hi] = build_occupancy_band(20, 0.5, 0.75);
  CHECK(lo.bound == 10);
  CHECK(hi.bound == 15);
  CHECK(lo.members.size() == 20);
  CHECK(hi.members.size() == 20);

  auto [vlo, vhi] = build_occupancy_band(7, 0.0, 1.0);
  CHECK(vlo.bound == 0);
  CHECK(vhi.bound == 7);

  CHECK(code_of([] { build_occupancy_band(5, 0.8, 0.2); }) == Errc::invalid_argument);
  CHECK(code_of([] { build_occupancy_band(5, -0.1, 0.5); }) == Errc::invalid_argument);
  CHECK(code_of([] { build_occupancy_band(5, 0.5, 1.2); }) == Errc::invalid_argument);
}

TEST_CASE("violation counting enumerates instances, not magnitudes") {
  // Empty week against a lower bound of 1 (one violation per day) plus a
  // 2-day minimum for each of the 4 employees.
  ConstraintSet cs;
  cs.lower_groups.push_back({range_members(0, 4), 1});
  cs.min_presence_days.assign(4, 2);
  Schedule empty(4, 5);
  CHECK(violation_count(empty, cs) == 5 + 4);
  CHECK_FALSE(is_feasible(empty, cs));

  Schedule full(4, 5);
  std::fill(full.on.begin(), full.on.end(), 1);
  CHECK(violation_count(full, cs) == 0);
  CHECK(is_feasible(full, cs));
}

TEST_CASE("the published schedule satisfies the base-case rules") {
  Schedule s = published_schedule();
  ConstraintSet cs = base_rules();
  CHECK(violation_count(s, cs) == 0);
  CHECK(is_feasible(s, cs));
  for (std::size_t d = 0; d < 5; ++d) CHECK(daily_headcount(s, d) == 10);
}

TEST_CASE("perturbing the published schedule breaks feasibility") {
  ConstraintSet cs = base_rules();

  Schedule s = published_schedule();
  // Send Monday's crowd home: the band floor and both section minima fail.
  for (std::size_t i = 0; i < 20; ++i) s.set_present(i, 0, false);
  std::size_t v = violation_count(s, cs);
  CHECK(v >= 3);
  CHECK_FALSE(is_feasible(s, cs));

  Schedule t = published_schedule();
  // One extra body on Monday is fine (11 <= 15)...
  t.set_present(2, 0, true);
  CHECK(violation_count(t, cs) == 0);
  // ...but six more breach the cap.
  for (std::size_t i : {4, 5, 11, 13, 17, 18}) t.set_present(i, 0, true);
  CHECK(violation_count(t, cs) == 1);
}

TEST_CASE("daily headcount") {
  Schedule zeros(6, 3);
  CHECK(daily_headcount(zeros, 0) == 0);
  Schedule ones(6, 3);
  std::fill(ones.on.begin(), ones.on.end(), 1);
  CHECK(daily_headcount(ones, 2) == 6);
  CHECK(daily_headcount(published_schedule(), 0) == 10);
  CHECK(code_of([&] { daily_headcount(zeros, 3); }) == Errc::invalid_argument);
}

TEST_CASE("test capacity counts only when a plan is provided") {
  ConstraintSet cs;
  cs.test_capacity.assign(3, 1);
  Schedule s(3, 4);
  TestPlan t(3, 4);
  t.set_tested(0, 0, true);
  t.set_tested(0, 1, true);  // employee 0 over capacity
  t.set_tested(1, 2, true);

  CHECK(violation_count(s, cs) == 0);
  CHECK(violation_count(s, t, cs) == 1);
  CHECK(is_feasible(s, cs));
  CHECK_FALSE(is_feasible(s, t, cs));
}

TEST_CASE("violations with tests decompose into presence part plus capacity part") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> bound(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 5, days = 4;
    Schedule s(n, days);
    TestPlan t(n, days);
    for (auto& b : s.on) b = static_cast<std::uint8_t>(coin(rng));
    for (auto& b : t.given) b = static_cast<std::uint8_t>(coin(rng));

    ConstraintSet cs;
    cs.lower_groups.push_back({range_members(0, 3), bound(rng)});
    cs.upper_groups.push_back({range_members(1, 5), bound(rng) + 1});
    cs.min_presence_days.assign(n, bound(rng));
    cs.test_capacity.assign(n, bound(rng));

    ConstraintSet only_tc;
    only_tc.test_capacity = cs.test_capacity;

    CHECK(violation_count(s, t, cs) == violation_count(s, cs) + violation_count(s, t, only_tc));
  }
}

TEST_CASE("adding a group never lowers the violation count") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> member(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Schedule s(6, 5);
    for (auto& b : s.on) b = static_cast<std::uint8_t>(coin(rng));
    ConstraintSet cs;
    cs.lower_groups.push_back({range_members(0, 3), 2});
    std::size_t before = violation_count(s, cs);

    std::vector<std::size_t> extra = {member(rng)};
    if (extra[0] != 5) extra.push_back(5);
    cs.lower_groups.push_back({extra, extra.size()});
    CHECK(violation_count(s, cs) >= before);
  }
}

TEST_CASE("relabeling employees preserves the count") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 6, days = 4;
    Schedule s(n, days);
    TestPlan t(n, days);
    for (auto& b : s.on) b = static_cast<std::uint8_t>(coin(rng));
    for (auto& b : t.given) b = static_cast<std::uint8_t>(coin(rng));

    ConstraintSet cs;
    cs.lower_groups.push_back({{0, 2, 4}, 2});
    cs.upper_groups.push_back({{1, 2, 3, 5}, 2});
    cs.min_presence_days = {1, 2, 0, 3, 1, 2};
    cs.test_capacity = {2, 1, 2, 0, 1, 3};

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    Schedule ps(n, days);
    TestPlan pt(n, days);
    ConstraintSet pcs;
    for (std::size_t d = 0; d < days; ++d)
      for (std::size_t i = 0; i < n; ++i) {
        ps.set_present(perm[i], d, s.present(i, d));
        pt.set_tested(perm[i], d, t.tested(i, d));
      }
    pcs.min_presence_days.resize(n);
    pcs.test_capacity.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pcs.min_presence_days[perm[i]] = cs.min_presence_days[i];
      pcs.test_capacity[perm[i]] = cs.test_capacity[i];
    }
    for (const auto& g : cs.lower_groups) {
      GroupBound pg{{}, g.bound};
      for (std::size_t m : g.members) pg.members.push_back(perm[m]);
      pcs.lower_groups.push_back(pg);
    }
    for (const auto& g : cs.upper_groups) {
      GroupBound pg{{}, g.bound};
      for (std::size_t m : g.members) pg.members.push_back(perm[m]);
      pcs.upper_groups.push_back(pg);
    }

    CHECK(violation_count(ps, pt, pcs) == violation_count(s, t, cs));
  }
}

TEST_CASE("constraint validation") {
  Schedule s(4, 2);

  ConstraintSet out_of_range;
  out_of_range.lower_groups.push_back({{0, 4}, 1});
  CHECK(code_of([&] { violation_count(s, out_of_range); }) == Errc::invalid_argument);

  ConstraintSet dup;
  dup.upper_groups.push_back({{1, 1}, 1});
  CHECK(code_of([&] { violation_count(s, dup); }) == Errc::invalid_argument);

  ConstraintSet too_big;
  too_big.lower_groups.push_back({{0, 1}, 3});  // bound exceeds group size
  CHECK(code_of([&] { violation_count(s, too_big); }) == Errc::invalid_argument);

  ConstraintSet short_vec;
  short_vec.min_presence_days = {1, 1};
  CHECK(code_of([&] { violation_count(s, short_vec); }) == Errc::invalid_argument);

  ConstraintSet short_tc;
  short_tc.test_capacity = {1};
  CHECK(code_of([&] { violation_count(s, TestPlan(4, 2), short_tc); }) == Errc::invalid_argument);

  // Upper bound above the group size is vacuous, not invalid.
  ConstraintSet loose;
  loose.upper_groups.push_back({{0, 1}, 5});
  CHECK(violation_count(s, loose) == 0);
}

TEST_CASE("test plan shape must match the schedule") {
  Schedule s(3, 3);
  TestPlan t(3, 2);
  ConstraintSet cs;
  cs.test_capacity.assign(3, 1);
  CHECK(code_of([&] { violation_count(s, t, cs); }) == Errc::invalid_argument);
}
