#pragma once

#include "modde/configuration.hpp"
#include "modde/population.hpp"
#include "modde/rng.hpp"

#include <span>
#include <vector>

namespace modde::mutation
{
    inline constexpr double kPBestFraction = 0.11;

    /// Base/Ref/Diffs decomposition of DE mutation:
    ///   mutant = base + [ref != none] * F_eff * (ref - target) + sum_k F * (x_a(k) - x_b(k))
    struct MutationPlan
    {
        BaseVector base = BaseVector::rand;
        RefVector ref = RefVector::none;
        int diffs = 1;
        bool weighted_f = false;
        bool archive = false;
        double p_best_fraction = kPBestFraction;

        static MutationPlan from(const Configuration& c)
        {
            return {c.base, c.ref, c.diffs, c.weighted_f, c.archive, kPBestFraction};
        }

        [[nodiscard]] int required_distinct() const
        {
            return 2 * diffs + (base == BaseVector::rand ? 1 : 0) + (ref == RefVector::rand ? 1 : 0);
        }
    };

    /// Indices drawn by one mutate call. Values >= population size refer to
    /// archive entries (offset by population size).
    struct Draw
    {
        std::size_t base = 0;
        std::size_t ref = 0;
        std::vector<std::size_t> differences; // pairs (a0, b0, a1, b1, ...)
        std::vector<std::size_t> distinct;    // every index that had to be distinct from the target
    };

    /// Budget-dependent scaling of F for the (ref - target) term:
    /// 0.7F below 20% progress, 0.8F below 40%, 1.2F afterwards.
    double weighted_f(double f, double progress);

    /// Uniform pick among the ceil(fraction * size) best members (pool size at least 2).
    std::size_t select_pbest(std::span<const Individual> population, double fraction, Rng& rng);

    /// Appends the loser; evicts a uniformly random entry when over capacity.
    void archive_push(std::vector<Individual>& archive, Individual loser, std::size_t max_size, Rng& rng);

    /// Shrinks the archive to max_size by uniform random eviction.
    void archive_shrink(std::vector<Individual>& archive, std::size_t max_size, Rng& rng);

    /// Builds the mutant for `target`. Throws InfeasibleOperatorError when the
    /// population cannot provide plan.required_distinct() indices besides the target.
    Vector mutate(const MutationPlan& plan, std::size_t target, std::span<const Individual> population,
                  std::span<const Individual> archive, double f, double progress, Rng& rng,
                  Draw* draw = nullptr);
}
