#include "modde/adaptation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace modde;
using namespace modde::adaptation;

TEST_SUITE("adaptation")
{
    TEST_CASE("no adaptation passes the configured constants through")
    {
        Rng rng(1);
        ShadeMemory mem;
        Individual ind;
        for (int i = 0; i < 100; ++i)
        {
            const auto p = sample_parameters(AdaptF::none, AdaptCR::none, mem, ind, 0.37, 0.81, rng);
            CHECK(p.f == 0.37);
            CHECK(p.cr == 0.81);
        }
    }

    TEST_CASE("fresh SHADE memory gives CR with mean 0.5")
    {
        Rng rng(2);
        ShadeMemory mem;
        Individual ind;
        double sum = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
            sum += sample_parameters(AdaptF::shade, AdaptCR::shade, mem, ind, 0.5, 0.5, rng).cr;
        CHECK(std::abs(sum / n - 0.5) < 0.01);
    }

    TEST_CASE("SHADE draws stay in range for any memory state")
    {
        Rng rng(3);
        Individual ind;
        for (int i = 0; i < 2000; ++i)
        {
            ShadeMemory mem;
            for (std::size_t k = 0; k < mem.size(); ++k)
            {
                mem.m_f[k] = rng.uniform(1e-3, 1.0);
                mem.m_cr[k] = rng.uniform(0.0, 1.0);
            }
            for (const auto mf : {AdaptF::shade, AdaptF::shade_modified})
            {
                const auto p = sample_parameters(mf, AdaptCR::shade, mem, ind, 0.5, 0.5, rng);
                CHECK(p.f > 0.0);
                CHECK(p.f <= 1.0);
                CHECK(p.cr >= 0.0);
                CHECK(p.cr <= 1.0);
            }
        }
    }

    TEST_CASE("shade_modified centres F on the mean of the memory")
    {
        ShadeMemory mem;
        mem.m_f = {0.2, 0.2, 0.2, 0.2, 0.2, 0.7};
        const double mean = (5 * 0.2 + 0.7) / 6.0;
        Individual ind;
        Rng rng(4);
        std::vector<double> modified, plain;
        for (int i = 0; i < 50000; ++i)
        {
            modified.push_back(sample_parameters(AdaptF::shade_modified, AdaptCR::none, mem, ind, 0.5, 0.5, rng).f);
            plain.push_back(sample_parameters(AdaptF::shade, AdaptCR::none, mem, ind, 0.5, 0.5, rng).f);
        }
        const auto median = [](std::vector<double> v) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            return v[v.size() / 2];
        };
        // median of Cauchy(mean, 0.1) conditioned on > 0 (the clip at 1 is above it)
        const double below_zero = 0.5 + std::atan(-mean / 0.1) / M_PI;
        const double expected = mean + 0.1 * std::tan(M_PI * (0.5 * below_zero));
        CHECK(std::abs(median(modified) - expected) < 0.01);
        CHECK(std::abs(median(plain) - expected) > 0.02);
    }

    TEST_CASE("jDE redraw ranges and pass-through")
    {
        Rng rng(5);
        ShadeMemory mem;
        Individual ind;
        ind.f = 0.42;
        ind.cr = 0.17;
        for (int i = 0; i < 10000; ++i)
        {
            const auto p = sample_parameters(AdaptF::jde, AdaptCR::jde, mem, ind, 0.5, 0.5, rng, 1.0);
            CHECK(p.f >= 0.1);
            CHECK(p.f <= 1.0);
            CHECK(p.cr >= 0.0);
            CHECK(p.cr <= 1.0);
        }
        const auto kept = sample_parameters(AdaptF::jde, AdaptCR::jde, mem, ind, 0.5, 0.5, rng, 0.0);
        CHECK(kept.f == 0.42);
        CHECK(kept.cr == 0.17);

        int redrawn = 0;
        for (int i = 0; i < 100000; ++i)
            redrawn += sample_parameters(AdaptF::jde, AdaptCR::none, mem, ind, 0.5, 0.5, rng).f != 0.42;
        CHECK(std::abs(redrawn / 100000.0 - kJdeTau) < 0.005);
    }

    TEST_CASE("shade_update hand examples")
    {
        ShadeMemory mem;
        const Success one[] = {{0.6, 0.3, 1.0}};
        shade_update(mem, one);
        CHECK(mem.m_f[0] == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(mem.m_cr[0] == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(mem.write_index == 1);

        const Success two[] = {{0.5, 0.2, 2.0}, {1.0, 0.6, 2.0}};
        shade_update(mem, two);
        CHECK(mem.m_f[1] == doctest::Approx(1.25 / 1.5).epsilon(1e-15));
        CHECK(mem.m_cr[1] == doctest::Approx(0.4).epsilon(1e-15));

        const auto before = mem;
        shade_update(mem, {});
        CHECK(mem == before);
    }

    TEST_CASE("shade_update matches weighted Lehmer and arithmetic means")
    {
        Rng rng(6);
        ShadeMemory mem;
        for (int round = 0; round < 1000; ++round)
        {
            const auto n = 1 + rng.index(30);
            std::vector<Success> s;
            for (std::size_t i = 0; i < n; ++i)
                s.push_back({rng.uniform(0.01, 1.0), rng.uniform(), rng.uniform(1e-6, 100.0)});

            // oracle: weights need no normalization in either ratio
            long double num = 0, den = 0, crw = 0, wsum = 0;
            for (const auto& x : s)
            {
                num += static_cast<long double>(x.improvement) * x.f * x.f;
                den += static_cast<long double>(x.improvement) * x.f;
                crw += static_cast<long double>(x.improvement) * x.cr;
                wsum += x.improvement;
            }
            const auto before = mem;
            const auto k = mem.write_index;
            shade_update(mem, s);
            CHECK(std::abs(mem.m_f[k] - static_cast<double>(num / den)) < 1e-12);
            CHECK(std::abs(mem.m_cr[k] - static_cast<double>(crw / wsum)) < 1e-12);
            CHECK(mem.write_index == (k + 1) % mem.size());
            for (std::size_t j = 0; j < mem.size(); ++j)
                if (j != k)
                {
                    CHECK(mem.m_f[j] == before.m_f[j]);
                    CHECK(mem.m_cr[j] == before.m_cr[j]);
                }
        }
    }

    TEST_CASE("linear population size reduction")
    {
        CHECK(lpsr_size(100, 4, 500, 1000) == 52);
        CHECK(lpsr_size(100, 4, 0, 1000) == 100);
        CHECK(lpsr_size(100, 4, 1000, 1000) == 4);
        CHECK(lpsr_size(90, 4, 50000, 50000) == 4);
        int prev = lpsr_size(90, 4, 0, 50000);
        for (std::uint64_t t = 1; t <= 50000; ++t)
        {
            const int now = lpsr_size(90, 4, t, 50000);
            CHECK(now <= prev);
            CHECK(prev - now <= 1);
            prev = now;
        }
    }

    TEST_CASE("caps schedule")
    {
        auto p = apply_caps({0.9, 0.2}, 0.1);
        CHECK(p.f == 0.7);
        CHECK(p.cr == 0.7);
        p = apply_caps({0.9, 0.2}, 0.3);
        CHECK(p.f == 0.7);
        CHECK(p.cr == 0.6);
        p = apply_caps({0.9, 0.2}, 0.55);
        CHECK(p.f == 0.7);
        CHECK(p.cr == 0.2);
        p = apply_caps({0.9, 0.2}, 0.8);
        CHECK(p.f == 0.9);
        CHECK(p.cr == 0.2);
        p = apply_caps({0.3, 0.95}, 0.0);
        CHECK(p.f == 0.3);
        CHECK(p.cr == 0.95);
    }
}
