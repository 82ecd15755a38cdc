#pragma once

#include "modde/configuration.hpp"
#include "modde/population.hpp"
#include "modde/rng.hpp"
#include "modde/types.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace modde::crossover
{
    /// mask[j] == true takes coordinate j from the mutant.
    using Mask = std::vector<bool>;

    /// u_j < cr or j == j_rand.
    Mask binomial_mask(std::size_t dim, double cr, Rng& rng);

    /// A run of consecutive coordinates (wrapping) starting at a uniform index,
    /// extended while u < cr, at most dim long.
    Mask exponential_mask(std::size_t dim, double cr, Rng& rng);

    Mask make_mask(CrossoverMethod method, std::size_t dim, double cr, Rng& rng);

    template <typename Scalar>
    VectorT<Scalar> apply_mask(const VectorT<Scalar>& target, const VectorT<Scalar>& mutant, const Mask& mask)
    {
        VectorT<Scalar> trial = target;
        for (Eigen::Index j = 0; j < trial.size(); ++j)
            if (mask[static_cast<std::size_t>(j)])
                trial[j] = mutant[j];
        return trial;
    }

    Vector crossover_bin(const Vector& target, const Vector& mutant, double cr, Rng& rng);
    Vector crossover_exp(const Vector& target, const Vector& mutant, double cr, Rng& rng);

    inline constexpr int kJacobiMaxSweeps = 100;
    inline constexpr double kJacobiTolerance = 1e-12;

    template <typename Scalar>
    struct SymmetricEigen
    {
        VectorT<Scalar> values;
        MatrixT<Scalar> vectors; // eigenvectors in columns
        int sweeps = 0;
    };

    /// Cyclic-by-row Jacobi eigenvalue iteration on the symmetrized input.
    /// Converged once the off-diagonal Frobenius norm drops to
    /// kJacobiTolerance * ||A||_F. Returns nullopt when that does not happen
    /// within max_sweeps or the input is not finite.
    template <typename Scalar>
    std::optional<SymmetricEigen<Scalar>> jacobi_eigen(const MatrixT<Scalar>& input,
                                                       int max_sweeps = kJacobiMaxSweeps)
    {
        using std::abs;
        using std::sqrt;
        const Eigen::Index n = input.rows();
        MatrixT<Scalar> a = (input + input.transpose()) / Scalar(2);
        MatrixT<Scalar> v = MatrixT<Scalar>::Identity(n, n);

        if (!a.allFinite())
            return std::nullopt;

        const Scalar norm = a.norm();
        const Scalar tolerance = Scalar(kJacobiTolerance) * norm;
        const auto off_norm = [&] {
            Scalar s(0);
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q)
                    s += Scalar(2) * a(p, q) * a(p, q);
            return sqrt(s);
        };

        int sweep = 0;
        for (; sweep <= max_sweeps; ++sweep)
        {
            if (off_norm() <= tolerance)
                return SymmetricEigen<Scalar>{a.diagonal(), v, sweep};
            if (sweep == max_sweeps)
                break;

            for (Eigen::Index p = 0; p < n - 1; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q)
                {
                    const Scalar apq = a(p, q);
                    if (apq == Scalar(0))
                        continue;
                    const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
                    const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                     (abs(theta) + sqrt(theta * theta + Scalar(1)));
                    const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
                    const Scalar s = t * c;

                    // A <- J^T A J with J the (p, q) plane rotation
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const Scalar akp = a(k, p);
                        const Scalar akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const Scalar apk = a(p, k);
                        const Scalar aqk = a(q, k);
                        a(p, k) = c * apk - s * aqk;
                        a(q, k) = s * apk + c * aqk;
                    }
                    a(p, q) = a(q, p) = Scalar(0);

                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const Scalar vkp = v(k, p);
                        const Scalar vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
        }
        return std::nullopt;
    }

    /// Unbiased sample covariance (1/(n-1)) of the columns of `points` (dim x n).
    template <typename Scalar>
    MatrixT<Scalar> sample_covariance(const MatrixT<Scalar>& points)
    {
        const Eigen::Index n = points.cols();
        const VectorT<Scalar> mean = points.rowwise().mean();
        const MatrixT<Scalar> centered = points.colwise() - mean;
        return (centered * centered.transpose()) / Scalar(n - 1);
    }

    /// Coordinate system for eigen crossover: y = R^T (x - mean), x = R y + mean,
    /// with the covariance eigenvectors as the columns of R.
    struct EigenBasis
    {
        Vector mean;
        Matrix rotation;
        bool fallback = false; // identity rotation was substituted

        [[nodiscard]] Vector to_eigen(const Vector& x) const { return rotation.transpose() * (x - mean); }
        [[nodiscard]] Vector from_eigen(const Vector& y) const { return rotation * y + mean; }

        static EigenBasis identity(Eigen::Index dim)
        {
            return {Vector::Zero(dim), Matrix::Identity(dim, dim), true};
        }
    };

    /// Basis from the current population. Falls back to the identity for
    /// fewer than two members, an all-zero covariance, or non-convergence.
    EigenBasis eigen_basis(std::span<const Individual> population);

    /// Crossover performed in the eigen coordinate system, mapped back.
    /// The exchange mask is drawn exactly as the plain operator draws it.
    Vector eigen_crossover(const Vector& target, const Vector& mutant, double cr, CrossoverMethod method,
                           const EigenBasis& basis, Rng& rng, Mask* mask_out = nullptr);
}
