#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "pansched/constraints.hpp"
#include "pansched/contact_graph.hpp"
#include "pansched/infection_model.hpp"
#include "pansched/schedule.hpp"

namespace pansched {

enum class Model { m1, m2 };

// Flat binary genome, day-major. Model 2: n*D presence bits. Model 1: n*D
// presence bits followed by n*D test bits.
struct Chromosome {
  std::vector<std::uint8_t> genes;
  double fitness = std::numeric_limits<double>::infinity();
};

struct GaConfig {
  std::size_t population_size = 0;  // 0 -> 100 + 2n
  std::size_t max_generations = 0;  // 0 -> 200 + 2n
  double mutation_prob = -1.0;      // negative -> 1/n (per-gene swap trigger)
  std::size_t tournament_size = 2;
  double crossover_prob = 0.9;
  std::uint64_t seed = 0;

  // Fills the n-dependent defaults; validates the result.
  GaConfig resolved(std::size_t n) const;
};

// Penalty fitness bound to one problem instance. objective + violation count,
// or violation count alone for the feasibility-search mode. Not shareable
// across threads (owns propagation scratch); create one per thread.
class FitnessEvaluator {
 public:
  enum class Kind { penalized, violations_only };

  FitnessEvaluator(const ContactGraph& graph, const EpidemicParams& params, const ConstraintSet& cs,
                   Model model, double pr_test = 0.0,
                   PropagationMode mode = PropagationMode::exact, Kind kind = Kind::penalized);

  std::size_t employees() const noexcept { return n_; }
  std::size_t days() const noexcept { return days_; }
  Model model() const noexcept { return model_; }
  std::size_t genome_length() const noexcept { return genome_len_; }

  // Swap-mutation partner ranges: one block for Model 2, presence and test
  // blocks for Model 1.
  std::vector<std::pair<std::size_t, std::size_t>> gene_blocks() const;

  double operator()(const std::uint8_t* genes) const;
  double operator()(const Chromosome& c) const { return (*this)(c.genes.data()); }

  double objective_of(const std::uint8_t* genes) const;
  std::size_t violations_of(const std::uint8_t* genes) const;

 private:
  std::size_t n_;
  std::size_t days_;
  Model model_;
  double pr_test_;
  Kind kind_;
  std::size_t genome_len_;
  Propagator prop_;
  ConstraintSet cs_;
  mutable Propagator::Workspace ws_;
};

// Spec-shaped one-shot fitness (builds a throwaway evaluator).
double fitness(const Chromosome& chrom, const ContactGraph& graph, const EpidemicParams& params,
               const ConstraintSet& cs, Model model, double pr_test = 0.0,
               PropagationMode mode = PropagationMode::exact);

// Samples k members uniformly with replacement, returns the index of the
// fittest (lowest fitness; first drawn wins ties).
std::size_t tournament_select_index(const std::vector<Chromosome>& pop, std::size_t k,
                                    std::mt19937_64& rng);
const Chromosome& tournament_select(const std::vector<Chromosome>& pop, std::size_t k,
                                    std::mt19937_64& rng);

// With probability crossover_prob picks a cut uniformly in [1, len-1] and
// swaps suffixes; otherwise the children are plain copies.
std::pair<Chromosome, Chromosome> single_point_crossover(const Chromosome& a, const Chromosome& b,
                                                         double crossover_prob, std::mt19937_64& rng);

// Each gene position triggers with probability mutation_prob and swaps with a
// partner drawn uniformly from its block. Triggers are generated by geometric
// gap sampling, which matches independent per-gene Bernoulli trials in
// distribution while drawing O(triggers) variates.
void swap_mutation(Chromosome& chrom, double mutation_prob,
                   const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                   std::mt19937_64& rng);

std::vector<Chromosome> random_population(std::size_t size, std::size_t genome_length,
                                          std::mt19937_64& rng);

struct EvolveResult {
  Chromosome best;
  std::vector<double> history;  // best fitness after init and each generation
};

// Elitist mu+lambda loop: per generation, lambda = population_size children
// are bred by tournament -> crossover -> mutation, and the best
// population_size of parents+children survive. Stops early once best fitness
// <= stop_at. cfg must be resolved.
EvolveResult evolve(std::vector<Chromosome> population, const GaConfig& cfg,
                    const FitnessEvaluator& eval, std::mt19937_64& rng,
                    double stop_at = -std::numeric_limits<double>::infinity());

struct SolveResult {
  Schedule schedule;
  TestPlan tests;  // filled for Model 1 only
  bool has_tests = false;
  double risk = 0.0;          // objective of the returned solution
  double best_fitness = 0.0;  // risk + violations
  std::size_t violations = 0;
  bool feasible = false;
  std::vector<double> history;
};

SolveResult solve_model1(const ContactGraph& graph, const EpidemicParams& params,
                         const ConstraintSet& cs, const GaConfig& cfg,
                         PropagationMode mode = PropagationMode::exact);
SolveResult solve_model2(const ContactGraph& graph, const EpidemicParams& params,
                         const ConstraintSet& cs, double pr_test, const GaConfig& cfg,
                         PropagationMode mode = PropagationMode::exact);

struct RandomFeasible {
  Schedule schedule;
  TestPlan tests;
  bool has_tests = false;
};

// GA over violation count alone; returns the first zero-penalty chromosome.
// Throws Error(infeasible) if none surfaces within max_generations.
RandomFeasible random_feasible(const ContactGraph& graph, const ConstraintSet& cs, std::size_t days,
                               const GaConfig& cfg, Model model);

}  // namespace pansched
