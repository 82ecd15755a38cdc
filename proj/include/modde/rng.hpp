#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace modde
{
    /// SplitMix64 finalizer; the seed mixing function for all derived streams.
    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Folds each key into the master seed: s <- splitmix64(s ^ splitmix64(key)).
    constexpr std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept
    {
        std::uint64_t s = splitmix64(master);
        for (const auto k : keys)
            s = splitmix64(s ^ splitmix64(k));
        return s;
    }

    /// mt19937_64 with portable derived draws: the std distributions are
    /// implementation-defined, so uniform/normal are computed here to keep
    /// runs bit-identical across standard libraries.
    __extension__ using uint128 = unsigned __int128;

    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

        std::uint64_t next() { return engine_(); }

        /// Uniform in [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        /// Uniform integer in [0, n), unbiased (Lemire's rejection).
        std::size_t index(std::size_t n)
        {
            const auto range = static_cast<std::uint64_t>(n);
            uint128 m = static_cast<uint128>(engine_()) * range;
            auto low = static_cast<std::uint64_t>(m);
            if (low < range)
            {
                const std::uint64_t threshold = (0 - range) % range;
                while (low < threshold)
                {
                    m = static_cast<uint128>(engine_()) * range;
                    low = static_cast<std::uint64_t>(m);
                }
            }
            return static_cast<std::size_t>(m >> 64);
        }

        /// Standard normal via the Marsaglia polar method (second variate discarded).
        double normal()
        {
            double u, v, s;
            do
            {
                u = 2.0 * uniform() - 1.0;
                v = 2.0 * uniform() - 1.0;
                s = u * u + v * v;
            } while (s >= 1.0 || s == 0.0);
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }

        double normal(double mean, double sd) { return mean + sd * normal(); }

        double cauchy(double location, double scale)
        {
            return location + scale * std::tan(std::numbers::pi * (uniform() - 0.5));
        }

        bool bernoulli(double p) { return uniform() < p; }

    private:
        std::mt19937_64 engine_;
    };
}
