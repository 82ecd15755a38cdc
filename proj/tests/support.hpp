#pragma once

#include "modde/population.hpp"
#include "modde/rng.hpp"
#include "modde/types.hpp"

#include <vector>

namespace modde::testing
{
    inline std::vector<Individual> random_population(std::size_t n, Eigen::Index dim, Rng& rng, double lo = -5.0,
                                                     double hi = 5.0)
    {
        std::vector<Individual> pop(n);
        for (auto& ind : pop)
        {
            ind.x = Vector(dim);
            for (Eigen::Index j = 0; j < dim; ++j)
                ind.x[j] = rng.uniform(lo, hi);
            ind.fitness = ind.x.squaredNorm();
        }
        return pop;
    }

    inline Vector random_vector(Eigen::Index dim, Rng& rng, double lo = -5.0, double hi = 5.0)
    {
        Vector v(dim);
        for (Eigen::Index j = 0; j < dim; ++j)
            v[j] = rng.uniform(lo, hi);
        return v;
    }

    /// Random symmetric positive definite matrix A = B B^T + eps I.
    inline Matrix random_spd(Eigen::Index n, Rng& rng)
    {
        Matrix b(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                b(i, j) = rng.normal();
        return b * b.transpose() + 1e-3 * Matrix::Identity(n, n);
    }
}
