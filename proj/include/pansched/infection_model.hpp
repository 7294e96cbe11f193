#pragma once

#include <cstdint>
#include <vector>

#include "pansched/contact_graph.hpp"

namespace pansched {

enum class InitialRiskPolicy {
  model_spec,          // PI_i^0 = beta_i * br
  weekend_compounded,  // PI_i^0 = v_i * (1 - (1-br)^2), v_i = 1-efficacy if vaccinated
};

enum class PropagationMode {
  exact,       // PI_i = 1 - (1-PI'_i) * prod_j (1 - p_ij beta_i x_j PI'_j)
  linearized,  // product replaced by 1 - sum, clamped to [0,1]
};

struct EpidemicParams {
  double beta_base = 0.1;
  double vaccine_efficacy = 0.85;
  double false_negative = 0.2;
  double background_risk = 4.2857142857142855e-6;  // daily out-of-workplace infection probability
  std::size_t horizon = 5;
  InitialRiskPolicy initial_risk_policy = InitialRiskPolicy::weekend_compounded;

  // Susceptibility of employee i.
  double beta_for(bool vaccinated) const {
    return vaccinated ? beta_base * (1.0 - vaccine_efficacy) : beta_base;
  }

  void validate() const;  // throws Error(invalid_argument)
};

// Per-employee infection probabilities after `day` scheduling days.
struct RiskState {
  std::size_t day = 0;
  std::vector<double> pi;
};

// Mean risk over a trajectory of D day-states (day 0 excluded by the caller):
// Z = (1/(D*n)) * sum_d sum_i PI_i^d. Accumulated in flat (d, i) order; the
// solver and the oracle both route through the same accumulation so their
// results are comparable without tolerance.
double objective(const std::vector<RiskState>& trajectory);

inline double objective_from_sum(double sum, std::size_t n, std::size_t days) {
  return sum / static_cast<double>(n * days);
}

// Scalar forms of the test-effect updates.
inline double apply_test_deterministic(double pi_prev, double tested, double fn_rate) {
  return pi_prev * (1.0 - tested) + pi_prev * tested * fn_rate;
}

inline double apply_test_probabilistic(double pi_prev, double pr_test, double fn_rate) {
  return (1.0 - pr_test) * pi_prev + pr_test * pi_prev * fn_rate;
}

// Precomputed propagation kernel bound to one (graph, params, mode) triple.
// Adjacency is stored per receiver i as (j, p_ij * beta_i) with zero-weight
// pairs dropped; skipping them is exact because their factor is 1.
//
// A Propagator is immutable after construction and shareable across threads;
// the mutable scratch lives in the caller-owned Workspace, so use one
// Workspace per thread.
class Propagator {
 public:
  struct Workspace {
    std::vector<double> pi;
    std::vector<double> masked;
  };

  Propagator(const ContactGraph& graph, const EpidemicParams& params,
             PropagationMode mode = PropagationMode::exact);

  std::size_t size() const noexcept { return n_; }
  const EpidemicParams& params() const noexcept { return params_; }
  PropagationMode mode() const noexcept { return mode_; }
  double beta(std::size_t i) const { return beta_[i]; }

  void initial(std::vector<double>& pi) const;

  // One scheduling day in place: test step for every employee, then the
  // contact step for the present ones. x and t are day columns of n bits.
  void step_model1(std::vector<double>& pi, const std::uint8_t* x, const std::uint8_t* t,
                   std::vector<double>& masked) const;
  void step_model2(std::vector<double>& pi, const std::uint8_t* x, double pr_test,
                   std::vector<double>& masked) const;

  // Contact step alone (inputs are post-test values).
  void contacts(std::vector<double>& pi, const std::uint8_t* x, std::vector<double>& masked) const;

  // Full-horizon objective for day-major presence/test matrices of n*days bits.
  double run_model1(const std::uint8_t* x, const std::uint8_t* t, std::size_t days,
                    Workspace& ws) const;
  double run_model2(const std::uint8_t* x, double pr_test, std::size_t days, Workspace& ws) const;

 private:
  struct Arc {
    std::uint32_t j;
    double w;  // p_ij * beta_i
  };

  std::size_t n_ = 0;
  EpidemicParams params_;
  PropagationMode mode_;
  std::vector<double> beta_;
  std::vector<std::uint8_t> vaccinated_;
  std::vector<std::size_t> offsets_;  // n_+1 entries into arcs_
  std::vector<Arc> arcs_;
};

// Whole-state convenience wrappers used by tests and the CLI; each builds a
// throwaway Propagator. Hot paths keep a Propagator instead.
RiskState initial_risk(const ContactGraph& graph, const EpidemicParams& params);
RiskState contact_update_exact(const RiskState& after_tests, const std::vector<std::uint8_t>& presence,
                               const ContactGraph& graph, const EpidemicParams& params);
RiskState contact_update_linearized(const RiskState& after_tests, const std::vector<std::uint8_t>& presence,
                                    const ContactGraph& graph, const EpidemicParams& params);
RiskState update_day_model1(const RiskState& state, const std::vector<std::uint8_t>& x_day,
                            const std::vector<std::uint8_t>& t_day, const ContactGraph& graph,
                            const EpidemicParams& params, PropagationMode mode = PropagationMode::exact);
RiskState update_day_model2(const RiskState& state, const std::vector<std::uint8_t>& x_day,
                            double pr_test, const ContactGraph& graph, const EpidemicParams& params,
                            PropagationMode mode = PropagationMode::exact);

}  // namespace pansched
