#pragma once

#include "modde/configuration.hpp"
#include "modde/rng.hpp"
#include "modde/types.hpp"

#include <cstdint>
#include <vector>

namespace modde::init
{
    inline constexpr std::size_t kMaxSobolDimension = 32;

    /// Unit-cube Sobol points (Joe-Kuo direction numbers, Gray-code order).
    /// Point 0 (the origin) is skipped. A nonzero shift seed applies a random
    /// digital shift (XOR scrambling) per coordinate.
    class SobolSequence
    {
    public:
        explicit SobolSequence(std::size_t dim, std::uint64_t shift_seed = 0);

        /// Next point in [0,1)^dim.
        Vector next();

        [[nodiscard]] std::size_t dim() const { return dim_; }

    private:
        static constexpr int kBits = 32;
        std::size_t dim_;
        std::vector<std::uint32_t> direction_; // dim_ * kBits, row-major per dimension
        std::vector<std::uint32_t> state_;
        std::vector<std::uint32_t> shift_;
        std::uint64_t index_ = 0;
    };

    /// i-th Halton point (i >= 1) using the first `dim` primes as bases, unscrambled.
    Vector halton_point(std::uint64_t i, std::size_t dim);

    /// Radical inverse of i in the given base.
    double radical_inverse(std::uint64_t i, std::uint32_t base);

    /// n points in the domain. Gaussian points are centred on the domain
    /// midpoint with sd (U-L)/6 per coordinate and are NOT repaired here.
    std::vector<Vector> sample(Sampler sampler, std::size_t n, const Domain& domain, Rng& rng);

    /// L + U - x.
    inline Vector opposite(const Vector& x, const Domain& domain)
    {
        return domain.lower + domain.upper - x;
    }

    /// The points followed by their opposites (2n vectors). The caller keeps
    /// the n best after evaluation.
    std::vector<Vector> oppose(const std::vector<Vector>& points, const Domain& domain);
}
