#include "modde/crossover.hpp"

namespace modde::crossover
{
    Mask binomial_mask(std::size_t dim, double cr, Rng& rng)
    {
        Mask mask(dim, false);
        const auto forced = rng.index(dim);
        for (std::size_t j = 0; j < dim; ++j)
            mask[j] = rng.uniform() < cr || j == forced;
        return mask;
    }

    Mask exponential_mask(std::size_t dim, double cr, Rng& rng)
    {
        Mask mask(dim, false);
        auto j = rng.index(dim);
        std::size_t copied = 0;
        do
        {
            mask[j] = true;
            j = (j + 1) % dim;
            ++copied;
        } while (copied < dim && rng.uniform() < cr);
        return mask;
    }

    Mask make_mask(CrossoverMethod method, std::size_t dim, double cr, Rng& rng)
    {
        return method == CrossoverMethod::bin ? binomial_mask(dim, cr, rng) : exponential_mask(dim, cr, rng);
    }

    Vector crossover_bin(const Vector& target, const Vector& mutant, double cr, Rng& rng)
    {
        return apply_mask(target, mutant, binomial_mask(static_cast<std::size_t>(target.size()), cr, rng));
    }

    Vector crossover_exp(const Vector& target, const Vector& mutant, double cr, Rng& rng)
    {
        return apply_mask(target, mutant, exponential_mask(static_cast<std::size_t>(target.size()), cr, rng));
    }

    EigenBasis eigen_basis(std::span<const Individual> population)
    {
        if (population.empty())
            return EigenBasis::identity(0);
        const auto dim = population.front().x.size();
        if (population.size() < 2)
            return EigenBasis::identity(dim);

        Matrix points(dim, static_cast<Eigen::Index>(population.size()));
        for (std::size_t i = 0; i < population.size(); ++i)
            points.col(static_cast<Eigen::Index>(i)) = population[i].x;

        const Matrix cov = sample_covariance(points);
        if (!cov.allFinite() || cov.cwiseAbs().maxCoeff() == 0.0)
            return EigenBasis::identity(dim);

        const auto eig = jacobi_eigen(cov);
        if (!eig)
            return EigenBasis::identity(dim);
        return {points.rowwise().mean(), eig->vectors, false};
    }

    Vector eigen_crossover(const Vector& target, const Vector& mutant, double cr, CrossoverMethod method,
                           const EigenBasis& basis, Rng& rng, Mask* mask_out)
    {
        const auto mask = make_mask(method, static_cast<std::size_t>(target.size()), cr, rng);
        if (mask_out)
            *mask_out = mask;
        return basis.from_eigen(apply_mask<Float>(basis.to_eigen(target), basis.to_eigen(mutant), mask));
    }
}
