#include "modde/initialization.hpp"

#include "modde/errors.hpp"

#include <array>
#include <bit>

namespace modde::init
{
    namespace
    {
        struct DirectionEntry
        {
            int degree;
            std::uint32_t coefficients;
            std::array<std::uint32_t, 7> m;
        };

        // Joe & Kuo (new-joe-kuo-6.21201), dimensions 2..32.
        constexpr std::array<DirectionEntry, 31> kJoeKuo{{
            {1, 0, {1}},
            {2, 1, {1, 3}},
            {3, 1, {1, 3, 1}},
            {3, 2, {1, 1, 1}},
            {4, 1, {1, 1, 3, 3}},
            {4, 4, {1, 3, 5, 13}},
            {5, 2, {1, 1, 5, 5, 17}},
            {5, 4, {1, 1, 5, 5, 5}},
            {5, 7, {1, 1, 7, 11, 19}},
            {5, 11, {1, 1, 5, 1, 1}},
            {5, 13, {1, 1, 1, 3, 11}},
            {5, 14, {1, 3, 5, 5, 31}},
            {6, 1, {1, 3, 3, 9, 7, 49}},
            {6, 13, {1, 1, 1, 15, 21, 21}},
            {6, 16, {1, 3, 1, 13, 27, 49}},
            {6, 19, {1, 1, 1, 15, 7, 5}},
            {6, 22, {1, 3, 1, 15, 13, 25}},
            {6, 25, {1, 1, 5, 5, 19, 61}},
            {7, 1, {1, 3, 7, 11, 23, 15, 103}},
            {7, 4, {1, 3, 7, 13, 13, 15, 69}},
            {7, 7, {1, 1, 3, 13, 7, 35, 63}},
            {7, 8, {1, 3, 5, 9, 1, 25, 53}},
            {7, 14, {1, 3, 1, 13, 9, 35, 107}},
            {7, 19, {1, 3, 1, 5, 27, 61, 31}},
            {7, 21, {1, 1, 5, 11, 19, 41, 61}},
            {7, 28, {1, 3, 5, 3, 3, 13, 69}},
            {7, 31, {1, 1, 7, 13, 1, 19, 1}},
            {7, 32, {1, 3, 7, 5, 13, 19, 59}},
            {7, 37, {1, 1, 3, 9, 25, 29, 41}},
            {7, 41, {1, 3, 5, 13, 23, 1, 55}},
            {7, 42, {1, 3, 7, 3, 13, 59, 17}},
        }};

        constexpr std::array<std::uint32_t, 64> kPrimes{
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
            179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269,
            271, 277, 281, 283, 293, 307, 311};

        std::uint32_t nth_prime(std::size_t n)
        {
            if (n < kPrimes.size())
                return kPrimes[n];
            std::uint32_t candidate = kPrimes.back();
            std::size_t count = kPrimes.size() - 1;
            while (count < n)
            {
                candidate += 2;
                bool prime = true;
                for (std::uint32_t d = 3; d * d <= candidate; d += 2)
                    if (candidate % d == 0)
                    {
                        prime = false;
                        break;
                    }
                if (prime)
                    ++count;
            }
            return candidate;
        }
    }

    SobolSequence::SobolSequence(std::size_t dim, std::uint64_t shift_seed)
        : dim_(dim), direction_(dim * kBits), state_(dim, 0), shift_(dim, 0)
    {
        if (dim == 0 || dim > kMaxSobolDimension)
            throw ConfigurationError("sobol sampler supports 1.." + std::to_string(kMaxSobolDimension) +
                                     " dimensions, got " + std::to_string(dim));

        for (int b = 0; b < kBits; ++b)
            direction_[b] = 1u << (kBits - 1 - b);

        for (std::size_t d = 1; d < dim; ++d)
        {
            const auto& e = kJoeKuo[d - 1];
            auto* v = &direction_[d * kBits];
            const int s = e.degree;
            for (int b = 0; b < kBits && b < s; ++b)
                v[b] = e.m[b] << (kBits - 1 - b);
            for (int b = s; b < kBits; ++b)
            {
                v[b] = v[b - s] ^ (v[b - s] >> s);
                for (int k = 1; k < s; ++k)
                    if ((e.coefficients >> (s - 1 - k)) & 1u)
                        v[b] ^= v[b - k];
            }
        }

        if (shift_seed != 0)
        {
            Rng rng(shift_seed);
            for (auto& s : shift_)
                s = static_cast<std::uint32_t>(rng.next() >> 32);
        }
    }

    Vector SobolSequence::next()
    {
        // Gray-code update from point index_ to index_ + 1.
        const auto c = static_cast<int>(std::countr_one(index_));
        if (c >= kBits)
            throw InputError("sobol sequence exhausted");
        ++index_;
        Vector p(static_cast<Eigen::Index>(dim_));
        for (std::size_t d = 0; d < dim_; ++d)
        {
            state_[d] ^= direction_[d * kBits + static_cast<std::size_t>(c)];
            p[static_cast<Eigen::Index>(d)] = static_cast<double>(state_[d] ^ shift_[d]) * 0x1.0p-32;
        }
        return p;
    }

    double radical_inverse(std::uint64_t i, std::uint32_t base)
    {
        double result = 0.0;
        double scale = 1.0 / base;
        while (i > 0)
        {
            result += static_cast<double>(i % base) * scale;
            i /= base;
            scale /= base;
        }
        return result;
    }

    Vector halton_point(std::uint64_t i, std::size_t dim)
    {
        Vector p(static_cast<Eigen::Index>(dim));
        for (std::size_t d = 0; d < dim; ++d)
            p[static_cast<Eigen::Index>(d)] = radical_inverse(i, nth_prime(d));
        return p;
    }

    std::vector<Vector> sample(Sampler sampler, std::size_t n, const Domain& domain, Rng& rng)
    {
        const auto dim = static_cast<std::size_t>(domain.dim());
        const Vector width = domain.width();
        std::vector<Vector> points;
        points.reserve(n);

        switch (sampler)
        {
        case Sampler::uniform:
            for (std::size_t i = 0; i < n; ++i)
            {
                Vector x(domain.dim());
                for (Eigen::Index j = 0; j < x.size(); ++j)
                    x[j] = domain.lower[j] + rng.uniform() * width[j];
                points.push_back(std::move(x));
            }
            break;
        case Sampler::gaussian:
        {
            const Vector center = domain.center();
            for (std::size_t i = 0; i < n; ++i)
            {
                Vector x(domain.dim());
                for (Eigen::Index j = 0; j < x.size(); ++j)
                    x[j] = rng.normal(center[j], width[j] / 6.0);
                points.push_back(std::move(x));
            }
            break;
        }
        case Sampler::sobol:
        {
            SobolSequence seq(dim, rng.next() | 1u);
            for (std::size_t i = 0; i < n; ++i)
                points.push_back(domain.lower + seq.next().cwiseProduct(width));
            break;
        }
        case Sampler::halton:
            for (std::size_t i = 0; i < n; ++i)
                points.push_back(domain.lower + halton_point(i + 1, dim).cwiseProduct(width));
            break;
        }
        return points;
    }

    std::vector<Vector> oppose(const std::vector<Vector>& points, const Domain& domain)
    {
        std::vector<Vector> out;
        out.reserve(points.size() * 2);
        out.insert(out.end(), points.begin(), points.end());
        for (const auto& x : points)
            out.push_back(opposite(x, domain));
        return out;
    }
}
