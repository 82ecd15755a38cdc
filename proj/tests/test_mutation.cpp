#include "modde/errors.hpp"
#include "modde/mutation.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace modde;
using namespace modde::mutation;
using modde::testing::random_population;

TEST_SUITE("mutation")
{
    TEST_CASE("weighted F schedule")
    {
        CHECK(weighted_f(0.5, 0.1) == doctest::Approx(0.35).epsilon(1e-15));
        CHECK(weighted_f(0.5, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(weighted_f(0.5, 0.3) == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(weighted_f(1.0, 0.2) == doctest::Approx(0.8).epsilon(1e-15));
        CHECK(weighted_f(1.0, 0.4) == doctest::Approx(1.2).epsilon(1e-15));
    }

    TEST_CASE("weighted F off leaves the ref term at F")
    {
        Rng rng(1);
        const auto pop = random_population(10, 4, rng);
        MutationPlan plan;
        plan.base = BaseVector::target;
        plan.ref = RefVector::best;
        plan.weighted_f = false;
        Rng a(5);
        Draw d;
        const auto m = mutate(plan, 3, pop, {}, 0.5, 0.1, a, &d);
        const Vector expected = pop[3].x + 0.5 * (pop[d.ref].x - pop[3].x) +
                                0.5 * (pop[d.differences[0]].x - pop[d.differences[1]].x);
        CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-14);

        plan.weighted_f = true;
        Rng b(5);
        const auto w = mutate(plan, 3, pop, {}, 0.5, 0.1, b, &d);
        const Vector expected_w = pop[3].x + 0.35 * (pop[d.ref].x - pop[3].x) +
                                  0.5 * (pop[d.differences[0]].x - pop[d.differences[1]].x);
        CHECK((w - expected_w).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("rand/1 is x_r1 + F (x_r2 - x_r3)")
    {
        Rng rng(2);
        const auto pop = random_population(8, 5, rng);
        for (int i = 0; i < 100; ++i)
        {
            Draw d;
            const auto target = static_cast<std::size_t>(i % 8);
            const auto m = mutate(MutationPlan{}, target, pop, {}, 0.7, 0.0, rng, &d);
            const Vector expected = pop[d.base].x + 0.7 * (pop[d.differences[0]].x - pop[d.differences[1]].x);
            CHECK(m == expected);
            const std::set<std::size_t> idx{target, d.base, d.differences[0], d.differences[1]};
            CHECK(idx.size() == 4);
        }
    }

    TEST_CASE("zero F without a ref term returns the base vector")
    {
        Rng rng(3);
        const auto pop = random_population(8, 5, rng);
        for (const auto base : {BaseVector::rand, BaseVector::best, BaseVector::target})
        {
            MutationPlan plan;
            plan.base = base;
            plan.diffs = 2;
            Draw d;
            const auto m = mutate(plan, 2, pop, {}, 0.0, 0.5, rng, &d);
            CHECK(m == pop[d.base].x);
            if (base == BaseVector::best)
                CHECK(d.base == best_index(pop));
            if (base == BaseVector::target)
                CHECK(d.base == 2);
        }
    }

    TEST_CASE("index distinctness at minimal population size for every plan")
    {
        Rng rng(4);
        for (const auto base : {BaseVector::rand, BaseVector::best, BaseVector::target})
            for (const auto ref : {RefVector::none, RefVector::pbest, RefVector::best, RefVector::rand})
                for (const int diffs : {1, 2})
                    for (const bool archive : {false, true})
                    {
                        MutationPlan plan{base, ref, diffs, false, archive, kPBestFraction};
                        const auto n = static_cast<std::size_t>(plan.required_distinct() + 1);
                        const auto pop = random_population(std::max<std::size_t>(n, 2), 3, rng);
                        const auto arch = random_population(archive ? 5 : 0, 3, rng);
                        for (int rep = 0; rep < 200; ++rep)
                        {
                            Draw d;
                            const auto target = rng.index(pop.size());
                            (void)mutate(plan, target, pop, arch, 0.5, 0.5, rng, &d);
                            std::set<std::size_t> idx(d.distinct.begin(), d.distinct.end());
                            CHECK(d.distinct.size() == static_cast<std::size_t>(plan.required_distinct()));
                            CHECK(idx.size() == d.distinct.size());
                            CHECK_FALSE(idx.contains(target));
                        }
                    }
    }

    TEST_CASE("lambda 4 rand/1 uses three indices besides the target")
    {
        Rng rng(5);
        const auto pop = random_population(4, 2, rng);
        for (std::size_t t = 0; t < 4; ++t)
        {
            Draw d;
            (void)mutate(MutationPlan{}, t, pop, {}, 0.5, 0, rng, &d);
            std::set<std::size_t> idx(d.distinct.begin(), d.distinct.end());
            idx.insert(t);
            CHECK(idx.size() == 4);
        }
    }

    TEST_CASE("too small a population is an infeasible-operator error")
    {
        Rng rng(6);
        const auto pop = random_population(5, 2, rng);
        MutationPlan plan;
        plan.diffs = 2; // needs 5 besides the target
        CHECK_THROWS_AS(mutate(plan, 0, pop, {}, 0.5, 0, rng), InfeasibleOperatorError);
        plan.base = BaseVector::target; // needs 4
        CHECK_NOTHROW(mutate(plan, 0, pop, {}, 0.5, 0, rng));
    }

    TEST_CASE("current-to-pbest/1 with archive")
    {
        Rng rng(7);
        const auto pop = random_population(20, 3, rng);
        const auto arch = random_population(15, 3, rng, 10.0, 20.0);
        MutationPlan plan{BaseVector::target, RefVector::pbest, 1, false, true, kPBestFraction};
        bool used_archive = false;
        for (int i = 0; i < 500; ++i)
        {
            Draw d;
            const auto m = mutate(plan, 4, pop, arch, 0.5, 0.5, rng, &d);
            const auto at = [&](std::size_t k) -> const Vector& { return k < 20 ? pop[k].x : arch[k - 20].x; };
            const Vector expected =
                pop[4].x + 0.5 * (pop[d.ref].x - pop[4].x) + 0.5 * (at(d.differences[0]) - at(d.differences[1]));
            CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-13);
            CHECK(d.differences[0] < 20); // only the subtrahend may come from the archive
            used_archive |= d.differences[1] >= 20;
        }
        CHECK(used_archive);
    }

    TEST_CASE("only the last subtrahend is drawn from the archive")
    {
        Rng rng(8);
        const auto pop = random_population(12, 3, rng);
        const auto arch = random_population(12, 3, rng);
        MutationPlan plan{BaseVector::rand, RefVector::none, 2, false, true, kPBestFraction};
        for (int i = 0; i < 1000; ++i)
        {
            Draw d;
            (void)mutate(plan, 0, pop, arch, 0.5, 0.5, rng, &d);
            CHECK(d.base < 12);
            CHECK(d.differences[0] < 12);
            CHECK(d.differences[1] < 12);
            CHECK(d.differences[2] < 12);
        }
    }

    TEST_CASE("identical members make every difference vanish")
    {
        Rng rng(9);
        std::vector<Individual> pop(8);
        for (auto& ind : pop)
        {
            ind.x = Vector::Constant(4, 1.25);
            ind.fitness = 1.0;
        }
        for (const auto ref : {RefVector::none, RefVector::pbest, RefVector::rand})
        {
            MutationPlan plan{BaseVector::rand, ref, 2, true, false, kPBestFraction};
            CHECK(mutate(plan, 1, pop, {}, 1.3, 0.7, rng) == pop[0].x);
        }
    }

    TEST_CASE("base=best with F -> 0 approaches the best member")
    {
        Rng rng(10);
        const auto pop = random_population(10, 3, rng);
        MutationPlan plan;
        plan.base = BaseVector::best;
        const auto m = mutate(plan, 0, pop, {}, 1e-12, 0, rng);
        CHECK((m - pop[best_index(pop)].x).norm() < 1e-10);
    }

    TEST_CASE("pbest pool")
    {
        Rng rng(11);
        auto pop = random_population(10, 2, rng);
        std::vector<std::size_t> order(10);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pop[a].fitness < pop[b].fitness; });

        // ceil(0.11 * 10) = 2
        std::set<std::size_t> seen;
        for (int i = 0; i < 1000; ++i)
            seen.insert(select_pbest(pop, 0.11, rng));
        CHECK(seen == std::set<std::size_t>{order[0], order[1]});

        std::vector<int> counts(10, 0);
        for (int i = 0; i < 10000; ++i)
            counts[select_pbest(pop, 1.0, rng)]++;
        for (const int c : counts)
            CHECK(std::abs(c - 1000) < 150);

        // ties: every index admissible
        for (auto& ind : pop)
            ind.fitness = 3.0;
        for (int i = 0; i < 100; ++i)
            CHECK(select_pbest(pop, 0.11, rng) < 10);

        // minimum pool of two even for tiny fractions
        seen.clear();
        pop = random_population(30, 2, rng);
        for (int i = 0; i < 500; ++i)
            seen.insert(select_pbest(pop, 0.001, rng));
        CHECK(seen.size() == 2);
    }

    TEST_CASE("archive capacity")
    {
        Rng rng(12);
        std::vector<Individual> archive;
        Individual ind;
        ind.x = Vector::Zero(2);
        archive_push(archive, ind, 10, rng);
        CHECK(archive.size() == 1);
        for (int i = 0; i < 1000; ++i)
        {
            ind.fitness = i;
            archive_push(archive, ind, 10, rng);
            CHECK(archive.size() <= 10);
        }
        CHECK(archive.size() == 10);
        archive_shrink(archive, 4, rng);
        CHECK(archive.size() == 4);
    }
}
