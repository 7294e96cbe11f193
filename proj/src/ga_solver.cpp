#include "pansched/ga_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pansched/error.hpp"

namespace pansched {

GaConfig GaConfig::resolved(std::size_t n) const {
  if (n == 0) throw Error(Errc::invalid_argument, "GA needs at least one employee");
  GaConfig r = *this;
  if (r.population_size == 0) r.population_size = 100 + 2 * n;
  if (r.max_generations == 0) r.max_generations = 200 + 2 * n;
  if (r.mutation_prob < 0.0) r.mutation_prob = 1.0 / static_cast<double>(n);
  if (r.population_size < 2) throw Error(Errc::invalid_argument, "population_size must be >= 2");
  if (r.tournament_size < 1) throw Error(Errc::invalid_argument, "tournament_size must be >= 1");
  if (r.mutation_prob > 1.0) throw Error(Errc::invalid_argument, "mutation_prob must lie in [0,1]");
  if (!(r.crossover_prob >= 0.0 && r.crossover_prob <= 1.0)) {
    throw Error(Errc::invalid_argument, "crossover_prob must lie in [0,1]");
  }
  return r;
}

FitnessEvaluator::FitnessEvaluator(const ContactGraph& graph, const EpidemicParams& params,
                                   const ConstraintSet& cs, Model model, double pr_test,
                                   PropagationMode mode, Kind kind)
    : n_(graph.size()),
      days_(params.horizon),
      model_(model),
      pr_test_(pr_test),
      kind_(kind),
      genome_len_(model == Model::m1 ? 2 * n_ * days_ : n_ * days_),
      prop_(graph, params, mode),
      cs_(cs) {
  cs_.validate(n_);
  if (model == Model::m2 && !(pr_test >= 0.0 && pr_test <= 1.0)) {
    throw Error(Errc::invalid_argument, "pr_test must lie in [0,1]");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> FitnessEvaluator::gene_blocks() const {
  const std::size_t nd = n_ * days_;
  if (model_ == Model::m1) return {{0, nd}, {nd, 2 * nd}};
  return {{0, nd}};
}

double FitnessEvaluator::operator()(const std::uint8_t* genes) const {
  const std::uint8_t* tests = model_ == Model::m1 ? genes + n_ * days_ : nullptr;
  auto violations = static_cast<double>(cs_.violations_raw(n_, days_, genes, tests));
  if (kind_ == Kind::violations_only) return violations;
  double obj = model_ == Model::m1 ? prop_.run_model1(genes, tests, days_, ws_)
                                   : prop_.run_model2(genes, pr_test_, days_, ws_);
  return obj + violations;
}

double FitnessEvaluator::objective_of(const std::uint8_t* genes) const {
  return model_ == Model::m1 ? prop_.run_model1(genes, genes + n_ * days_, days_, ws_)
                             : prop_.run_model2(genes, pr_test_, days_, ws_);
}

std::size_t FitnessEvaluator::violations_of(const std::uint8_t* genes) const {
  const std::uint8_t* tests = model_ == Model::m1 ? genes + n_ * days_ : nullptr;
  return cs_.violations_raw(n_, days_, genes, tests);
}

double fitness(const Chromosome& chrom, const ContactGraph& graph, const EpidemicParams& params,
               const ConstraintSet& cs, Model model, double pr_test, PropagationMode mode) {
  FitnessEvaluator eval(graph, params, cs, model, pr_test, mode);
  if (chrom.genes.size() != eval.genome_length()) {
    throw Error(Errc::invalid_argument, "chromosome length " + std::to_string(chrom.genes.size()) +
                                            " does not match genome length " +
                                            std::to_string(eval.genome_length()));
  }
  return eval(chrom);
}

std::size_t tournament_select_index(const std::vector<Chromosome>& pop, std::size_t k,
                                    std::mt19937_64& rng) {
  if (pop.empty()) throw Error(Errc::invalid_argument, "tournament over empty population");
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t c = 1; c < k; ++c) {
    std::size_t cand = pick(rng);
    if (pop[cand].fitness < pop[best].fitness) best = cand;
  }
  return best;
}

const Chromosome& tournament_select(const std::vector<Chromosome>& pop, std::size_t k,
                                    std::mt19937_64& rng) {
  return pop[tournament_select_index(pop, k, rng)];
}

std::pair<Chromosome, Chromosome> single_point_crossover(const Chromosome& a, const Chromosome& b,
                                                         double crossover_prob, std::mt19937_64& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw Error(Errc::invalid_argument, "crossover parents differ in length");
  }
  Chromosome c1{a.genes, std::numeric_limits<double>::infinity()};
  Chromosome c2{b.genes, std::numeric_limits<double>::infinity()};
  const std::size_t len = a.genes.size();
  if (len >= 2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < crossover_prob) {
      std::uniform_int_distribution<std::size_t> cut_dist(1, len - 1);
      std::size_t cut = cut_dist(rng);
      for (std::size_t g = cut; g < len; ++g) std::swap(c1.genes[g], c2.genes[g]);
    }
  }
  return {std::move(c1), std::move(c2)};
}

void swap_mutation(Chromosome& chrom, double mutation_prob,
                   const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                   std::mt19937_64& rng) {
  if (mutation_prob <= 0.0) return;
  chrom.fitness = std::numeric_limits<double>::infinity();
  for (const auto& [begin, end] : blocks) {
    if (end <= begin) continue;
    std::uniform_int_distribution<std::size_t> partner(begin, end - 1);
    if (mutation_prob >= 1.0) {
      for (std::size_t g = begin; g < end; ++g) std::swap(chrom.genes[g], chrom.genes[partner(rng)]);
      continue;
    }
    std::geometric_distribution<std::size_t> gap(mutation_prob);
    for (std::size_t g = begin + gap(rng); g < end; g += 1 + gap(rng)) {
      std::swap(chrom.genes[g], chrom.genes[partner(rng)]);
    }
  }
}

std::vector<Chromosome> random_population(std::size_t size, std::size_t genome_length,
                                          std::mt19937_64& rng) {
  std::vector<Chromosome> pop(size);
  std::uniform_int_distribution<int> bit(0, 1);
  for (auto& c : pop) {
    c.genes.resize(genome_length);
    for (auto& g : c.genes) g = static_cast<std::uint8_t>(bit(rng));
  }
  return pop;
}

EvolveResult evolve(std::vector<Chromosome> population, const GaConfig& cfg,
                    const FitnessEvaluator& eval, std::mt19937_64& rng, double stop_at) {
  if (population.empty()) throw Error(Errc::invalid_argument, "evolve needs a non-empty population");
  for (auto& c : population) {
    if (c.genes.size() != eval.genome_length()) {
      throw Error(Errc::invalid_argument, "population genome length mismatch");
    }
    if (std::isinf(c.fitness)) c.fitness = eval(c);
  }
  auto by_fitness = [](const Chromosome& a, const Chromosome& b) { return a.fitness < b.fitness; };
  std::stable_sort(population.begin(), population.end(), by_fitness);

  const auto blocks = eval.gene_blocks();
  const std::size_t mu = cfg.population_size;

  EvolveResult out;
  out.history.push_back(population.front().fitness);

  std::vector<Chromosome> children;
  children.reserve(mu + 1);
  for (std::size_t gen = 0; gen < cfg.max_generations; ++gen) {
    if (population.front().fitness <= stop_at) break;

    children.clear();
    while (children.size() < mu) {
      const Chromosome& p1 = population[tournament_select_index(population, cfg.tournament_size, rng)];
      const Chromosome& p2 = population[tournament_select_index(population, cfg.tournament_size, rng)];
      auto [c1, c2] = single_point_crossover(p1, p2, cfg.crossover_prob, rng);
      swap_mutation(c1, cfg.mutation_prob, blocks, rng);
      swap_mutation(c2, cfg.mutation_prob, blocks, rng);
      c1.fitness = eval(c1);
      c2.fitness = eval(c2);
      children.push_back(std::move(c1));
      children.push_back(std::move(c2));
    }
    children.resize(mu);

    // mu+lambda: children first so survivors of equal fitness favor the newer
    // genome. On integer penalty plateaus this keeps neutral drift alive;
    // elder-preferring ties freeze the population once every member shares one
    // violation count.
    children.insert(children.end(), std::make_move_iterator(population.begin()),
                    std::make_move_iterator(population.end()));
    population = std::move(children);
    std::stable_sort(population.begin(), population.end(), by_fitness);
    population.resize(mu);
    children.clear();
    out.history.push_back(population.front().fitness);
  }

  out.best = population.front();
  return out;
}

namespace {

Schedule decode_schedule(const std::uint8_t* genes, std::size_t n, std::size_t days) {
  Schedule s(n, days);
  std::copy(genes, genes + n * days, s.on.begin());
  return s;
}

TestPlan decode_tests(const std::uint8_t* genes, std::size_t n, std::size_t days) {
  TestPlan t(n, days);
  std::copy(genes, genes + n * days, t.given.begin());
  return t;
}

// Integer penalties cut the landscape into plateaus the GA sometimes fails to
// cross from one random start. Fresh starts from the same rng stream are
// deterministic and leave a first-try success bit for bit unchanged.
constexpr std::size_t kGaAttempts = 12;

SolveResult solve_impl(const ContactGraph& graph, const EpidemicParams& params,
                       const ConstraintSet& cs, Model model, double pr_test, const GaConfig& cfg,
                       PropagationMode mode) {
  const std::size_t n = graph.size();
  const std::size_t days = params.horizon;
  GaConfig rc = cfg.resolved(n);

  FitnessEvaluator eval(graph, params, cs, model, pr_test, mode);
  std::mt19937_64 rng(rc.seed);

  EvolveResult ev;
  bool have = false;
  for (std::size_t attempt = 0; attempt < kGaAttempts; ++attempt) {
    auto pop = random_population(rc.population_size, eval.genome_length(), rng);
    EvolveResult cand = evolve(std::move(pop), rc, eval, rng);
    if (!have || cand.best.fitness < ev.best.fitness) {
      ev = std::move(cand);
      have = true;
    }
    if (eval.violations_of(ev.best.genes.data()) == 0) break;
  }

  SolveResult out;
  out.history = std::move(ev.history);
  out.best_fitness = ev.best.fitness;
  out.violations = eval.violations_of(ev.best.genes.data());
  out.feasible = out.violations == 0;
  out.risk = eval.objective_of(ev.best.genes.data());
  out.schedule = decode_schedule(ev.best.genes.data(), n, days);
  if (model == Model::m1) {
    out.tests = decode_tests(ev.best.genes.data() + n * days, n, days);
    out.has_tests = true;
  }
  return out;
}

}  // namespace

SolveResult solve_model1(const ContactGraph& graph, const EpidemicParams& params,
                         const ConstraintSet& cs, const GaConfig& cfg, PropagationMode mode) {
  return solve_impl(graph, params, cs, Model::m1, 0.0, cfg, mode);
}

SolveResult solve_model2(const ContactGraph& graph, const EpidemicParams& params,
                         const ConstraintSet& cs, double pr_test, const GaConfig& cfg,
                         PropagationMode mode) {
  return solve_impl(graph, params, cs, Model::m2, pr_test, cfg, mode);
}

RandomFeasible random_feasible(const ContactGraph& graph, const ConstraintSet& cs, std::size_t days,
                               const GaConfig& cfg, Model model) {
  const std::size_t n = graph.size();
  if (days == 0) throw Error(Errc::invalid_argument, "random_feasible needs days >= 1");
  GaConfig rc = cfg.resolved(n);

  // Fitness is the bare violation count so the baseline stays risk-blind. A
  // single start stalls on integer plateaus often enough to matter, so the
  // budget is spent as fresh restarts from one rng stream instead.
  EpidemicParams params;  // placeholder epidemic settings; the objective is unused
  params.horizon = days;
  FitnessEvaluator eval(graph, params, cs, model, 0.0, PropagationMode::exact,
                        FitnessEvaluator::Kind::violations_only);
  std::mt19937_64 rng(rc.seed);

  for (std::size_t attempt = 0; attempt < kGaAttempts; ++attempt) {
    auto pop = random_population(rc.population_size, eval.genome_length(), rng);
    EvolveResult ev = evolve(std::move(pop), rc, eval, rng, 0.5);
    if (ev.best.fitness != 0.0) continue;

    RandomFeasible out;
    out.schedule = decode_schedule(ev.best.genes.data(), n, days);
    if (model == Model::m1) {
      out.tests = decode_tests(ev.best.genes.data() + n * days, n, days);
      out.has_tests = true;
    }
    return out;
  }
  throw Error(Errc::infeasible, "no feasible chromosome found within " +
                                    std::to_string(rc.max_generations) + " generations");
}

}  // namespace pansched
