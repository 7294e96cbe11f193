#include "pansched/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>
#include <vector>

#include "pansched/error.hpp"

namespace pansched {

namespace {

// Column generation scans 2^n masks, so cap n before the budget estimate can
// even be formed.
constexpr std::size_t kMaxMaskBits = 20;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) r = sat_mul(r, base);
  return r;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t t = 0; t < k; ++t) r = r * (n - t) / (t + 1);  // exact at desk scale
  return r;
}

// Day columns satisfying every per-day group bound, as bitmasks with their
// byte expansions (bit/byte i = employee i).
struct DayColumns {
  std::vector<std::uint32_t> masks;
  std::vector<std::uint8_t> bytes;  // masks.size() * n
};

DayColumns feasible_columns(const ConstraintSet& cs, std::size_t n) {
  std::vector<std::uint32_t> lower_masks, upper_masks;
  std::vector<std::size_t> lower_bounds, upper_bounds;
  for (const auto& g : cs.lower_groups) {
    std::uint32_t m = 0;
    for (std::size_t i : g.members) m |= std::uint32_t{1} << i;
    lower_masks.push_back(m);
    lower_bounds.push_back(g.bound);
  }
  for (const auto& g : cs.upper_groups) {
    std::uint32_t m = 0;
    for (std::size_t i : g.members) m |= std::uint32_t{1} << i;
    upper_masks.push_back(m);
    upper_bounds.push_back(g.bound);
  }

  DayColumns out;
  const std::uint32_t top = std::uint32_t{1} << n;
  for (std::uint32_t mask = 0; mask < top; ++mask) {
    bool ok = true;
    for (std::size_t k = 0; ok && k < lower_masks.size(); ++k) {
      ok = std::popcount(mask & lower_masks[k]) >= static_cast<int>(lower_bounds[k]);
    }
    for (std::size_t k = 0; ok && k < upper_masks.size(); ++k) {
      ok = std::popcount(mask & upper_masks[k]) <= static_cast<int>(upper_bounds[k]);
    }
    if (!ok) continue;
    out.masks.push_back(mask);
    for (std::size_t i = 0; i < n; ++i) out.bytes.push_back((mask >> i) & 1u);
  }
  return out;
}

void flatten_genes(const std::vector<std::uint32_t>& x_masks, const std::vector<std::uint32_t>& t_masks,
                   std::size_t n, bool with_tests, std::vector<std::uint8_t>& out) {
  out.clear();
  for (std::uint32_t m : x_masks)
    for (std::size_t i = 0; i < n; ++i) out.push_back((m >> i) & 1u);
  if (with_tests) {
    for (std::uint32_t m : t_masks)
      for (std::size_t i = 0; i < n; ++i) out.push_back((m >> i) & 1u);
  }
}

struct Search {
  Search(std::size_t n_, std::size_t days_, Model model_, double pr_test_, const Propagator& prop_,
         const DayColumns& cols_, const std::vector<std::size_t>& min_presence_)
      : n(n_), days(days_), model(model_), pr_test(pr_test_), prop(prop_), cols(cols_),
        min_presence(min_presence_) {
    remaining_tc.assign(n, std::numeric_limits<std::size_t>::max());
    pi_level.assign(days + 1, {});
    prop.initial(pi_level[0]);
    t_bytes.assign(n, 0);
    worked.assign(n, 0);
    path_x.assign(days, 0);
    path_t.assign(days, 0);
  }

  std::size_t n;
  std::size_t days;
  Model model;
  double pr_test;
  const Propagator& prop;
  const DayColumns& cols;
  const std::vector<std::size_t>& min_presence;  // may be empty
  std::vector<std::size_t> remaining_tc;         // Model 1; SIZE_MAX = unbounded
  std::uint32_t exhausted = 0;                   // bit i set when remaining_tc[i] == 0

  std::vector<std::vector<double>> pi_level;  // days+1 states
  std::vector<double> masked;
  std::vector<std::uint8_t> t_bytes;
  std::vector<std::size_t> worked;
  std::vector<std::uint32_t> path_x, path_t;

  bool has_best = false;
  double best_sum = 0.0;
  std::vector<std::uint8_t> best_genes;
  std::vector<std::uint8_t> cand_genes;
  std::uint64_t states = 0;
  std::uint64_t leaves = 0;

  bool min_presence_reachable(std::size_t days_left) const {
    if (min_presence.empty()) return true;
    for (std::size_t i = 0; i < n; ++i) {
      if (worked[i] + days_left < min_presence[i]) return false;
    }
    return true;
  }

  void leaf(double total) {
    ++leaves;
    if (has_best && total > best_sum) return;
    flatten_genes(path_x, path_t, n, model == Model::m1, cand_genes);
    if (!has_best || total < best_sum ||
        std::lexicographical_compare(cand_genes.begin(), cand_genes.end(), best_genes.begin(),
                                     best_genes.end())) {
      has_best = true;
      best_sum = total;
      best_genes = cand_genes;
    }
  }

  void expand(std::size_t d, double partial, const std::uint8_t* x_col, std::uint32_t t_mask) {
    ++states;
    auto& pi = pi_level[d + 1];
    pi = pi_level[d];
    if (model == Model::m1) {
      for (std::size_t i = 0; i < n; ++i) t_bytes[i] = (t_mask >> i) & 1u;
      prop.step_model1(pi, x_col, t_bytes.data(), masked);
    } else {
      prop.step_model2(pi, x_col, pr_test, masked);
    }
    double p2 = partial;
    for (std::size_t i = 0; i < n; ++i) p2 += pi[i];
    if (has_best && p2 > best_sum) return;  // partial sums only grow
    if (d + 1 == days) {
      leaf(p2);
    } else {
      descend(d + 1, p2);
    }
  }

  void descend(std::size_t d, double partial) {
    const std::size_t days_left = days - d - 1;
    for (std::size_t ci = 0; ci < cols.masks.size(); ++ci) {
      const std::uint32_t x_mask = cols.masks[ci];
      const std::uint8_t* x_col = cols.bytes.data() + ci * n;
      for (std::size_t i = 0; i < n; ++i) worked[i] += x_col[i];
      path_x[d] = x_mask;
      if (min_presence_reachable(days_left)) {
        if (model == Model::m2) {
          expand(d, partial, x_col, 0);
        } else {
          const std::uint32_t top = std::uint32_t{1} << n;
          for (std::uint32_t t_mask = 0; t_mask < top; ++t_mask) {
            if (t_mask & exhausted) continue;
            path_t[d] = t_mask;
            take_tests(t_mask);
            expand(d, partial, x_col, t_mask);
            give_back_tests(t_mask);
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) worked[i] -= x_col[i];
    }
  }

  void take_tests(std::uint32_t t_mask) {
    while (t_mask) {
      std::size_t i = static_cast<std::size_t>(std::countr_zero(t_mask));
      t_mask &= t_mask - 1;
      if (--remaining_tc[i] == 0) exhausted |= std::uint32_t{1} << i;
    }
  }

  void give_back_tests(std::uint32_t t_mask) {
    while (t_mask) {
      std::size_t i = static_cast<std::size_t>(std::countr_zero(t_mask));
      t_mask &= t_mask - 1;
      if (remaining_tc[i]++ == 0) exhausted &= ~(std::uint32_t{1} << i);
    }
  }
};

}  // namespace

OracleResult enumerate_optimum(const ContactGraph& graph, const EpidemicParams& params,
                               const ConstraintSet& cs, Model model, double pr_test,
                               PropagationMode mode, const OracleBudget& budget) {
  const std::size_t n = graph.size();
  const std::size_t days = params.horizon;
  if (budget.max_states == 0) throw Error(Errc::invalid_argument, "oracle budget must be positive");
  if (n == 0) throw Error(Errc::invalid_argument, "empty graph");
  if (n > kMaxMaskBits) {
    throw Error(Errc::budget_exceeded,
                "n=" + std::to_string(n) + " exceeds the oracle's enumeration limit of " +
                    std::to_string(kMaxMaskBits) + " employees");
  }
  cs.validate(n);
  if (model == Model::m2 && !(pr_test >= 0.0 && pr_test <= 1.0)) {
    throw Error(Errc::invalid_argument, "pr_test must lie in [0,1]");
  }

  DayColumns cols = feasible_columns(cs, n);
  if (cols.masks.empty()) throw Error(Errc::infeasible, "no day column satisfies the group bounds");

  std::uint64_t estimate = sat_pow(cols.masks.size(), days);
  if (model == Model::m1) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t tc = cs.test_capacity.empty() ? days : std::min(cs.test_capacity[i], days);
      std::uint64_t patterns = 0;
      for (std::size_t k = 0; k <= tc; ++k) patterns += binomial(days, k);
      estimate = sat_mul(estimate, patterns);
    }
  }
  if (estimate > budget.max_states) {
    throw Error(Errc::budget_exceeded, "estimated search space " + std::to_string(estimate) +
                                           " exceeds budget " + std::to_string(budget.max_states));
  }

  Propagator prop(graph, params, mode);
  Search s(n, days, model, pr_test, prop, cols, cs.min_presence_days);
  if (model == Model::m1 && !cs.test_capacity.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      s.remaining_tc[i] = cs.test_capacity[i];
      if (cs.test_capacity[i] == 0) s.exhausted |= std::uint32_t{1} << i;
    }
  }

  s.descend(0, 0.0);

  if (!s.has_best) {
    throw Error(Errc::infeasible, "constraint set admits no feasible assignment");
  }

  OracleResult out;
  out.risk = objective_from_sum(s.best_sum, n, days);
  out.states_visited = s.states;
  out.leaves = s.leaves;
  out.schedule = Schedule(n, days);
  std::copy(s.best_genes.begin(), s.best_genes.begin() + n * days, out.schedule.on.begin());
  if (model == Model::m1) {
    out.tests = TestPlan(n, days);
    std::copy(s.best_genes.begin() + n * days, s.best_genes.end(), out.tests.given.begin());
    out.has_tests = true;
  }
  return out;
}

std::uint64_t enumerate_feasible_count(const ConstraintSet& cs, std::size_t n, std::size_t days,
                                       const OracleBudget& budget) {
  if (budget.max_states == 0) throw Error(Errc::invalid_argument, "oracle budget must be positive");
  if (n == 0 || days == 0) throw Error(Errc::invalid_argument, "need n >= 1 and days >= 1");
  if (n > kMaxMaskBits) {
    throw Error(Errc::budget_exceeded,
                "n=" + std::to_string(n) + " exceeds the oracle's enumeration limit of " +
                    std::to_string(kMaxMaskBits) + " employees");
  }
  cs.validate(n);

  DayColumns cols = feasible_columns(cs, n);
  if (sat_pow(cols.masks.size(), days) > budget.max_states) {
    throw Error(Errc::budget_exceeded, "estimated search space exceeds budget");
  }

  std::vector<std::size_t> worked(n, 0);
  std::uint64_t count = 0;
  auto reachable = [&](std::size_t days_left) {
    if (cs.min_presence_days.empty()) return true;
    for (std::size_t i = 0; i < n; ++i) {
      if (worked[i] + days_left < cs.min_presence_days[i]) return false;
    }
    return true;
  };

  // Iterative DFS over day columns; reachability pruning keeps only branches
  // that can still satisfy the per-employee minimums, so every leaf counts.
  std::vector<std::size_t> choice(days, 0);
  std::size_t d = 0;
  while (true) {
    if (choice[d] == cols.masks.size()) {
      if (d == 0) break;
      choice[d] = 0;
      --d;
      const std::uint8_t* col = cols.bytes.data() + choice[d] * n;
      for (std::size_t i = 0; i < n; ++i) worked[i] -= col[i];
      ++choice[d];
      continue;
    }
    const std::uint8_t* col = cols.bytes.data() + choice[d] * n;
    for (std::size_t i = 0; i < n; ++i) worked[i] += col[i];
    if (!reachable(days - d - 1)) {
      for (std::size_t i = 0; i < n; ++i) worked[i] -= col[i];
      ++choice[d];
      continue;
    }
    if (d + 1 == days) {
      ++count;
      for (std::size_t i = 0; i < n; ++i) worked[i] -= col[i];
      ++choice[d];
    } else {
      ++d;
    }
  }
  return count;
}

}  // namespace pansched
