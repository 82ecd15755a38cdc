#include "modde/mutation.hpp"

#include "modde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modde
{
    std::size_t best_index(std::span<const Individual> members)
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (members[i].fitness < members[best].fitness)
                best = i;
        return best;
    }
}

namespace modde::mutation
{
    namespace
    {
        bool contains(const std::vector<std::size_t>& v, std::size_t x)
        {
            return std::find(v.begin(), v.end(), x) != v.end();
        }

        std::size_t draw_distinct(std::size_t pool, std::vector<std::size_t>& used, Rng& rng)
        {
            std::size_t r;
            do
                r = rng.index(pool);
            while (contains(used, r));
            used.push_back(r);
            return r;
        }
    }

    double weighted_f(double f, double progress)
    {
        if (progress < 0.2)
            return 0.7 * f;
        if (progress < 0.4)
            return 0.8 * f;
        return 1.2 * f;
    }

    std::size_t select_pbest(std::span<const Individual> population, double fraction, Rng& rng)
    {
        const auto n = population.size();
        auto pool = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
        pool = std::clamp<std::size_t>(pool, std::min<std::size_t>(2, n), n);

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (population[a].fitness != population[b].fitness)
                                  return population[a].fitness < population[b].fitness;
                              return a < b;
                          });
        return order[rng.index(pool)];
    }

    void archive_push(std::vector<Individual>& archive, Individual loser, std::size_t max_size, Rng& rng)
    {
        archive.push_back(std::move(loser));
        archive_shrink(archive, max_size, rng);
    }

    void archive_shrink(std::vector<Individual>& archive, std::size_t max_size, Rng& rng)
    {
        while (archive.size() > max_size)
        {
            const auto victim = rng.index(archive.size());
            archive[victim] = std::move(archive.back());
            archive.pop_back();
        }
    }

    Vector mutate(const MutationPlan& plan, std::size_t target, std::span<const Individual> population,
                  std::span<const Individual> archive, double f, double progress, Rng& rng, Draw* draw)
    {
        const auto n = population.size();
        const auto need = static_cast<std::size_t>(plan.required_distinct());
        if (n < need + 1)
            throw InfeasibleOperatorError("mutation needs " + std::to_string(need) +
                                          " distinct indices besides the target, population has " +
                                          std::to_string(n));

        Draw local;
        Draw& d = draw ? *draw : local;
        d = Draw{};

        std::vector<std::size_t> used{target};
        const auto at = [&](std::size_t i) -> const Vector& {
            return i < n ? population[i].x : archive[i - n].x;
        };

        switch (plan.base)
        {
        case BaseVector::rand:
            d.base = draw_distinct(n, used, rng);
            break;
        case BaseVector::best:
            d.base = best_index(population);
            break;
        case BaseVector::target:
            d.base = target;
            break;
        }

        Vector mutant = at(d.base);

        if (plan.ref != RefVector::none)
        {
            switch (plan.ref)
            {
            case RefVector::pbest:
                d.ref = select_pbest(population, plan.p_best_fraction, rng);
                break;
            case RefVector::best:
                d.ref = best_index(population);
                break;
            case RefVector::rand:
                d.ref = draw_distinct(n, used, rng);
                break;
            case RefVector::none:
                break;
            }
            const double f_ref = plan.weighted_f ? weighted_f(f, progress) : f;
            mutant += f_ref * (at(d.ref) - population[target].x);
        }

        for (int k = 0; k < plan.diffs; ++k)
        {
            const auto a = draw_distinct(n, used, rng);
            const bool last = k + 1 == plan.diffs;
            const auto b = (last && plan.archive && !archive.empty())
                               ? draw_distinct(n + archive.size(), used, rng)
                               : draw_distinct(n, used, rng);
            d.differences.push_back(a);
            d.differences.push_back(b);
            mutant += f * (at(a) - at(b));
        }

        d.distinct.assign(used.begin() + 1, used.end());
        return mutant;
    }
}
