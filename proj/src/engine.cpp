#include "modde/engine.hpp"

#include "modde/boundary.hpp"
#include "modde/errors.hpp"
#include "modde/initialization.hpp"

#include <algorithm>
#include <numeric>

namespace modde
{
    namespace
    {
        bool uses_shade_memory(const Configuration& c)
        {
            return c.adapt_f == AdaptF::shade || c.adapt_f == AdaptF::shade_modified || c.adapt_cr == AdaptCR::shade;
        }

        /// Indices sorted by fitness, ties by position.
        std::vector<std::size_t> ranking(const std::vector<Individual>& members)
        {
            std::vector<std::size_t> order(members.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return members[a].fitness < members[b].fitness;
            });
            return order;
        }

        /// Keeps the `keep` best members, preserving their relative order.
        void truncate_worst(std::vector<Individual>& members, std::size_t keep)
        {
            if (members.size() <= keep)
                return;
            const auto order = ranking(members);
            std::vector<bool> kept(members.size(), false);
            for (std::size_t i = 0; i < keep; ++i)
                kept[order[i]] = true;
            std::vector<Individual> out;
            out.reserve(keep);
            for (std::size_t i = 0; i < members.size(); ++i)
                if (kept[i])
                    out.push_back(std::move(members[i]));
            members = std::move(out);
        }
    }

    double evaluate(EngineState& state, Individual& individual)
    {
        individual.fitness = problems::evaluate(*state.problem, individual.x);
        const auto n = ++state.population.evaluations_used;
        if (!state.best.evaluated() || individual.fitness < state.best.fitness)
        {
            state.best = individual;
            state.log.record(n, problems::precision(*state.problem, individual.fitness));
        }
        return individual.fitness;
    }

    EngineState initialize(const Configuration& config, const problems::ProblemInstance& problem,
                           std::uint64_t budget, std::uint64_t seed, RunOptions options)
    {
        validate(config);
        if (budget < static_cast<std::uint64_t>(config.lambda))
            throw InputError("budget " + std::to_string(budget) + " is smaller than lambda " +
                             std::to_string(config.lambda));

        EngineState s;
        s.config = config;
        s.problem = &problem;
        s.budget = budget;
        s.seed = seed;
        s.rng = Rng(seed);
        s.lambda_init = config.lambda;
        s.lambda_min = std::max(kMinLambda, required_distinct_indices(config) + 1);
        s.options = std::move(options);
        s.log.metadata = {std::string(problems::to_string(problem.function)),
                          problem.instance_seed,
                          problem.dimension,
                          digest(config),
                          s.options.label,
                          seed,
                          budget};

        const auto n = static_cast<std::size_t>(config.lambda);
        const auto& domain = problem.domain;
        auto points = init::sample(config.sampler, n, domain, s.rng);

        if (config.sampler == Sampler::gaussian)
        {
            const Sdis repair = config.sdis == Sdis::none ? Sdis::saturate : config.sdis;
            const Vector center = domain.center();
            for (auto& x : points)
                x = boundary::correct(repair, x, center, domain, s.rng).x;
        }
        if (config.opposition)
            points = init::oppose(points, domain);

        std::vector<Individual> candidates;
        candidates.reserve(points.size());
        for (auto& x : points)
        {
            if (s.exhausted())
                break;
            Individual ind{std::move(x), 0.0, config.f, config.cr, true};
            evaluate(s, ind);
            candidates.push_back(std::move(ind));
        }
        truncate_worst(candidates, n);

        s.population.members = std::move(candidates);
        s.population_trace.push_back({s.population.evaluations_used, static_cast<int>(s.population.size())});
        return s;
    }

    TrialBatch build_trials(const Configuration& config, const problems::ProblemInstance& problem,
                            std::span<const Individual> snapshot, std::span<const Individual> archive,
                            const adaptation::ShadeMemory& memory, double progress, Rng& rng)
    {
        const auto plan = mutation::MutationPlan::from(config);
        const auto dim = static_cast<std::size_t>(problem.dimension);
        const auto basis = config.eigen_x ? crossover::eigen_basis(snapshot) : crossover::EigenBasis{};

        TrialBatch batch;
        batch.trials.reserve(snapshot.size());
        batch.used.reserve(snapshot.size());
        for (std::size_t i = 0; i < snapshot.size(); ++i)
        {
            const auto& target = snapshot[i];
            const auto drawn = adaptation::sample_parameters(config.adapt_f, config.adapt_cr, memory, target,
                                                             config.f, config.cr, rng);
            const auto used = config.caps ? adaptation::apply_caps(drawn, progress) : drawn;

            const Vector mutant = mutation::mutate(plan, i, snapshot, archive, used.f, progress, rng);
            const Vector x =
                config.eigen_x
                    ? crossover::eigen_crossover(target.x, mutant, used.cr, config.crossover, basis, rng)
                    : crossover::apply_mask(target.x, mutant, crossover::make_mask(config.crossover, dim, used.cr, rng));
            auto repaired = boundary::correct(config.sdis, x, target.x, problem.domain, rng);

            Individual trial;
            trial.x = std::move(repaired.x);
            trial.feasible = repaired.feasible;
            // jDE trials carry the redrawn values; they become personal parameters on survival
            trial.f = config.adapt_f == AdaptF::jde ? drawn.f : target.f;
            trial.cr = config.adapt_cr == AdaptCR::jde ? drawn.cr : target.cr;
            batch.trials.push_back(std::move(trial));
            batch.used.push_back(used);
        }
        return batch;
    }

    bool step_generation(EngineState& s)
    {
        if (s.exhausted())
            return false;

        auto& pop = s.population;
        const double progress = s.progress();
        const std::vector<Individual> before = pop.members;

        auto [trials, used_params] =
            build_trials(s.config, *s.problem, before, pop.archive, s.memory, progress, s.rng);

        std::size_t evaluated = 0;
        for (auto& t : trials)
        {
            if (s.exhausted())
                break;
            evaluate(s, t);
            ++evaluated;
        }
        trials.resize(evaluated);

        std::vector<adaptation::Success> successes;
        const auto capacity = pop.members.size();
        for (std::size_t i = 0; i < evaluated; ++i)
        {
            auto& target = pop.members[i];
            auto& trial = trials[i];
            if (!(trial.fitness <= target.fitness))
                continue;
            if (trial.fitness < target.fitness)
                successes.push_back({used_params[i].f, used_params[i].cr, target.fitness - trial.fitness});
            if (s.config.archive)
                mutation::archive_push(pop.archive, target, capacity, s.rng);
            target = trial;
        }

        if (s.options.on_generation)
            s.options.on_generation({pop.generation, before, trials, pop.members, pop.archive});

        if (uses_shade_memory(s.config))
            adaptation::shade_update(s.memory, successes);

        if (s.config.lpsr)
        {
            const int target_size = std::max(
                s.lambda_min,
                adaptation::lpsr_size(s.lambda_init, s.lambda_min, pop.evaluations_used, s.budget));
            if (static_cast<std::size_t>(target_size) < pop.members.size())
            {
                truncate_worst(pop.members, static_cast<std::size_t>(target_size));
                mutation::archive_shrink(pop.archive, pop.members.size(), s.rng);
                s.population_trace.push_back({pop.evaluations_used, target_size});
            }
        }

        ++pop.generation;
        return !s.exhausted();
    }

    RunResult finish(EngineState&& s)
    {
        RunResult r;
        r.log = std::move(s.log);
        r.best = std::move(s.best);
        r.seed = s.seed;
        r.evaluations = s.population.evaluations_used;
        r.generations = s.population.generation;
        r.population_trace = std::move(s.population_trace);
        return r;
    }

    RunResult run(const Configuration& config, const problems::ProblemInstance& problem, std::uint64_t budget,
                  std::uint64_t seed, RunOptions options)
    {
        auto state = initialize(config, problem, budget, seed, std::move(options));
        while (step_generation(state))
        {
        }
        return finish(std::move(state));
    }
}
