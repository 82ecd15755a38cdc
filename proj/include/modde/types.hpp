#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace modde
{
    template <typename Scalar>
    using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    using Float = double;
    using Vector = VectorT<Float>;
    using Matrix = MatrixT<Float>;

    /// Axis-aligned box [lower, upper].
    struct Domain
    {
        Vector lower;
        Vector upper;

        static Domain cube(std::size_t dim, Float lo, Float hi)
        {
            return {Vector::Constant(static_cast<Eigen::Index>(dim), lo),
                    Vector::Constant(static_cast<Eigen::Index>(dim), hi)};
        }

        [[nodiscard]] Eigen::Index dim() const { return lower.size(); }
        [[nodiscard]] Vector width() const { return upper - lower; }
        [[nodiscard]] Vector center() const { return (lower + upper) / 2.0; }

        [[nodiscard]] bool contains(const Vector& x) const
        {
            return x.size() == lower.size() &&
                   (x.array() >= lower.array()).all() &&
                   (x.array() <= upper.array()).all();
        }
    };
}
