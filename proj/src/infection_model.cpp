#include "pansched/infection_model.hpp"

#include <algorithm>
#include <string>

#include "pansched/error.hpp"

namespace pansched {

namespace {

void require_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(Errc::invalid_argument, std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

}  // namespace

void EpidemicParams::validate() const {
  require_prob(beta_base, "beta_base");
  require_prob(vaccine_efficacy, "vaccine_efficacy");
  require_prob(false_negative, "false_negative");
  require_prob(background_risk, "background_risk");
  if (horizon < 1) throw Error(Errc::invalid_argument, "horizon must be >= 1");
}

double objective(const std::vector<RiskState>& trajectory) {
  if (trajectory.empty()) throw Error(Errc::invalid_argument, "objective of an empty trajectory");
  const std::size_t n = trajectory.front().pi.size();
  double sum = 0.0;
  for (const auto& state : trajectory) {
    if (state.pi.size() != n) throw Error(Errc::invalid_argument, "trajectory states disagree on n");
    for (double v : state.pi) sum += v;
  }
  return objective_from_sum(sum, n, trajectory.size());
}

Propagator::Propagator(const ContactGraph& graph, const EpidemicParams& params, PropagationMode mode)
    : n_(graph.size()), params_(params), mode_(mode) {
  params_.validate();
  beta_.resize(n_);
  vaccinated_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    vaccinated_[i] = graph.vaccinated(i) ? 1 : 0;
    beta_[i] = params_.beta_for(graph.vaccinated(i));
  }

  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t deg = 0;
    for (std::size_t j = 0; j < n_; ++j)
      if (graph.contact(i, j) > 0.0) ++deg;
    offsets_[i + 1] = offsets_[i] + deg;
  }
  arcs_.resize(offsets_[n_]);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t k = offsets_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      double p = graph.contact(i, j);
      if (p > 0.0) arcs_[k++] = {static_cast<std::uint32_t>(j), p * beta_[i]};
    }
  }
}

void Propagator::initial(std::vector<double>& pi) const {
  pi.resize(n_);
  const double br = params_.background_risk;
  if (params_.initial_risk_policy == InitialRiskPolicy::model_spec) {
    for (std::size_t i = 0; i < n_; ++i) pi[i] = beta_[i] * br;
  } else {
    // Monday-morning risk after an untested two-day weekend.
    const double keep = 1.0 - br;
    const double weekend = 1.0 - keep * keep;
    for (std::size_t i = 0; i < n_; ++i) {
      double v = vaccinated_[i] ? 1.0 - params_.vaccine_efficacy : 1.0;
      pi[i] = v * weekend;
    }
  }
}

void Propagator::contacts(std::vector<double>& pi, const std::uint8_t* x,
                          std::vector<double>& masked) const {
  masked.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) masked[j] = x[j] ? pi[j] : 0.0;

  // A factor of exactly 1 leaves PI_i fixed, so days without effective
  // contact are skipped outright; rewriting pi as 1-(1-pi) would otherwise
  // smear ulp-level noise over employees nothing happened to.
  if (mode_ == PropagationMode::exact) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!x[i]) continue;  // absentees keep their post-test value
      double prod = 1.0;
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        prod *= 1.0 - arcs_[k].w * masked[arcs_[k].j];
      }
      if (prod == 1.0) continue;
      pi[i] = 1.0 - (1.0 - pi[i]) * prod;
    }
  } else {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!x[i]) continue;
      double sum = 0.0;
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        sum += arcs_[k].w * masked[arcs_[k].j];
      }
      // Same shape as the exact branch so a single nonzero term gives a
      // bit-identical factor and result.
      double factor = 1.0 - sum;
      if (factor == 1.0) continue;
      double v = 1.0 - (1.0 - pi[i]) * factor;
      pi[i] = std::min(1.0, std::max(0.0, v));
    }
  }
}

void Propagator::step_model1(std::vector<double>& pi, const std::uint8_t* x, const std::uint8_t* t,
                             std::vector<double>& masked) const {
  const double fn = params_.false_negative;
  // Tests run for every employee, absent ones included.
  for (std::size_t i = 0; i < n_; ++i) {
    if (t[i]) pi[i] *= fn;
  }
  contacts(pi, x, masked);
}

void Propagator::step_model2(std::vector<double>& pi, const std::uint8_t* x, double pr_test,
                             std::vector<double>& masked) const {
  const double fn = params_.false_negative;
  for (std::size_t i = 0; i < n_; ++i) {
    pi[i] = apply_test_probabilistic(pi[i], pr_test, fn);
  }
  contacts(pi, x, masked);
}

double Propagator::run_model1(const std::uint8_t* x, const std::uint8_t* t, std::size_t days,
                              Workspace& ws) const {
  initial(ws.pi);
  double sum = 0.0;
  for (std::size_t d = 0; d < days; ++d) {
    step_model1(ws.pi, x + d * n_, t + d * n_, ws.masked);
    for (std::size_t i = 0; i < n_; ++i) sum += ws.pi[i];
  }
  return objective_from_sum(sum, n_, days);
}

double Propagator::run_model2(const std::uint8_t* x, double pr_test, std::size_t days,
                              Workspace& ws) const {
  initial(ws.pi);
  double sum = 0.0;
  for (std::size_t d = 0; d < days; ++d) {
    step_model2(ws.pi, x + d * n_, pr_test, ws.masked);
    for (std::size_t i = 0; i < n_; ++i) sum += ws.pi[i];
  }
  return objective_from_sum(sum, n_, days);
}

namespace {

void check_day_vector(const std::vector<std::uint8_t>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw Error(Errc::invalid_argument,
                std::string(name) + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
}

void check_state(const RiskState& s, std::size_t n) {
  if (s.pi.size() != n) {
    throw Error(Errc::invalid_argument, "risk state has " + std::to_string(s.pi.size()) +
                                            " entries, expected " + std::to_string(n));
  }
}

}  // namespace

RiskState initial_risk(const ContactGraph& graph, const EpidemicParams& params) {
  Propagator prop(graph, params);
  RiskState s;
  s.day = 0;
  prop.initial(s.pi);
  return s;
}

RiskState contact_update_exact(const RiskState& after_tests, const std::vector<std::uint8_t>& presence,
                               const ContactGraph& graph, const EpidemicParams& params) {
  check_day_vector(presence, graph.size(), "presence");
  check_state(after_tests, graph.size());
  Propagator prop(graph, params, PropagationMode::exact);
  RiskState s = after_tests;
  std::vector<double> masked;
  prop.contacts(s.pi, presence.data(), masked);
  return s;
}

RiskState contact_update_linearized(const RiskState& after_tests, const std::vector<std::uint8_t>& presence,
                                    const ContactGraph& graph, const EpidemicParams& params) {
  check_day_vector(presence, graph.size(), "presence");
  check_state(after_tests, graph.size());
  Propagator prop(graph, params, PropagationMode::linearized);
  RiskState s = after_tests;
  std::vector<double> masked;
  prop.contacts(s.pi, presence.data(), masked);
  return s;
}

RiskState update_day_model1(const RiskState& state, const std::vector<std::uint8_t>& x_day,
                            const std::vector<std::uint8_t>& t_day, const ContactGraph& graph,
                            const EpidemicParams& params, PropagationMode mode) {
  check_day_vector(x_day, graph.size(), "x_day");
  check_day_vector(t_day, graph.size(), "t_day");
  check_state(state, graph.size());
  Propagator prop(graph, params, mode);
  RiskState s = state;
  std::vector<double> masked;
  prop.step_model1(s.pi, x_day.data(), t_day.data(), masked);
  s.day = state.day + 1;
  return s;
}

RiskState update_day_model2(const RiskState& state, const std::vector<std::uint8_t>& x_day,
                            double pr_test, const ContactGraph& graph, const EpidemicParams& params,
                            PropagationMode mode) {
  check_day_vector(x_day, graph.size(), "x_day");
  if (!(pr_test >= 0.0 && pr_test <= 1.0)) {
    throw Error(Errc::invalid_argument, "pr_test must lie in [0,1]");
  }
  check_state(state, graph.size());
  Propagator prop(graph, params, mode);
  RiskState s = state;
  std::vector<double> masked;
  prop.step_model2(s.pi, x_day.data(), pr_test, masked);
  s.day = state.day + 1;
  return s;
}

}  // namespace pansched
