#pragma once

#include "modde/adaptation.hpp"
#include "modde/configuration.hpp"
#include "modde/crossover.hpp"
#include "modde/metrics.hpp"
#include "modde/mutation.hpp"
#include "modde/population.hpp"
#include "modde/problems.hpp"
#include "modde/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace modde
{
    struct PopulationSizeChange
    {
        std::uint64_t evaluations;
        int lambda;

        bool operator==(const PopulationSizeChange&) const = default;
    };

    struct RunResult
    {
        metrics::RunLog log;
        Individual best;
        std::uint64_t seed = 0;
        std::uint64_t evaluations = 0;
        std::uint64_t generations = 0;
        /// Population size at start and after every change.
        std::vector<PopulationSizeChange> population_trace;
    };

    /// Everything a generation hands to an observer, after replacement.
    struct GenerationEvent
    {
        std::uint64_t generation;
        const std::vector<Individual>& before;
        const std::vector<Individual>& trials; // only the evaluated trials
        const std::vector<Individual>& after;  // before population size reduction
        const std::vector<Individual>& archive;
    };

    struct RunOptions
    {
        std::function<void(const GenerationEvent&)> on_generation;
        std::string label;
    };

    /// Mutable state of one run. Single-threaded; owns its RNG.
    struct EngineState
    {
        Configuration config;
        const problems::ProblemInstance* problem = nullptr;
        std::uint64_t budget = 0;
        std::uint64_t seed = 0;
        Rng rng;
        Population population;
        adaptation::ShadeMemory memory;
        int lambda_init = 0;
        int lambda_min = kMinLambda;
        Individual best;
        metrics::RunLog log;
        std::vector<PopulationSizeChange> population_trace;
        RunOptions options;

        [[nodiscard]] double progress() const
        {
            return static_cast<double>(population.evaluations_used) / static_cast<double>(budget);
        }
        [[nodiscard]] bool exhausted() const { return population.evaluations_used >= budget; }
    };

    /// Validates, samples and evaluates the initial population.
    /// Throws ConfigurationError / InfeasibleOperatorError before any evaluation,
    /// InputError if budget < lambda.
    EngineState initialize(const Configuration& config, const problems::ProblemInstance& problem,
                           std::uint64_t budget, std::uint64_t seed, RunOptions options = {});

    /// Evaluates x, counting one evaluation and updating best-so-far and the log.
    double evaluate(EngineState& state, Individual& individual);

    struct TrialBatch
    {
        std::vector<Individual> trials;
        std::vector<adaptation::Parameters> used; // F and CR each trial was built with
    };

    /// Builds one trial per member from the given snapshot. Reads nothing but
    /// its arguments, so trials never see each other.
    TrialBatch build_trials(const Configuration& config, const problems::ProblemInstance& problem,
                                         std::span<const Individual> snapshot, std::span<const Individual> archive,
                                         const adaptation::ShadeMemory& memory, double progress, Rng& rng);

    /// One generation: build trials, evaluate them in order (stopping at the
    /// budget), replace each target whose trial is no worse, then adapt the
    /// memories and the population size. Returns false once the budget is used.
    bool step_generation(EngineState& state);

    RunResult finish(EngineState&& state);

    RunResult run(const Configuration& config, const problems::ProblemInstance& problem, std::uint64_t budget,
                  std::uint64_t seed, RunOptions options = {});
}
