#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace pansched {

// Binary presence plan over a scheduling horizon. Stored day-major so a day
// column is contiguous: on[d*n + i] = 1 iff employee i is on-site on day d.
struct Schedule {
  std::size_t n = 0;
  std::size_t days = 0;
  std::vector<std::uint8_t> on;

  Schedule() = default;
  Schedule(std::size_t n_, std::size_t days_) : n(n_), days(days_), on(n_ * days_, 0) {}

  bool present(std::size_t i, std::size_t d) const { return on[d * n + i] != 0; }
  void set_present(std::size_t i, std::size_t d, bool v) { on[d * n + i] = v ? 1 : 0; }

  const std::uint8_t* day(std::size_t d) const { return on.data() + d * n; }

  std::size_t headcount(std::size_t d) const {
    const std::uint8_t* col = day(d);
    return std::accumulate(col, col + n, std::size_t{0});
  }

  std::size_t presence_days(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t d = 0; d < days; ++d) c += on[d * n + i];
    return c;
  }
};

// Binary test plan, same shape and layout as Schedule.
struct TestPlan {
  std::size_t n = 0;
  std::size_t days = 0;
  std::vector<std::uint8_t> given;

  TestPlan() = default;
  TestPlan(std::size_t n_, std::size_t days_) : n(n_), days(days_), given(n_ * days_, 0) {}

  bool tested(std::size_t i, std::size_t d) const { return given[d * n + i] != 0; }
  void set_tested(std::size_t i, std::size_t d, bool v) { given[d * n + i] = v ? 1 : 0; }

  const std::uint8_t* day(std::size_t d) const { return given.data() + d * n; }

  std::size_t tests_taken(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t d = 0; d < days; ++d) c += given[d * n + i];
    return c;
  }
};

}  // namespace pansched
