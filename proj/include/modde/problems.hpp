#pragma once

#include "modde/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace modde::problems
{
    enum class FunctionId
    {
        sphere = 1,
        ellipsoid = 2,
        linear_slope = 3,
        rosenbrock = 4,
        rastrigin = 5,
        shell = 6,
    };

    inline constexpr std::array<FunctionId, 6> kSuite{
        FunctionId::sphere, FunctionId::ellipsoid, FunctionId::linear_slope,
        FunctionId::rosenbrock, FunctionId::rastrigin, FunctionId::shell};

    inline constexpr double kDomainBound = 5.0;
    inline constexpr double kEllipsoidCondition = 1e6;

    std::string_view to_string(FunctionId id);

    /// Accepts a name ("sphere", "linear_slope", ...) or the numeric id.
    FunctionId parse_function(std::string_view name);

    /// A seeded instance of one suite function on [-5, 5]^D.
    struct ProblemInstance
    {
        FunctionId function = FunctionId::sphere;
        int dimension = 0;
        std::uint64_t instance_seed = 0;
        Vector x_opt;
        double f_opt = 0.0;
        Matrix rotation;     // identity for the separable functions
        Vector slope_signs;  // linear slope only
        Domain domain;

        double operator()(const Vector& x) const;
    };

    ProblemInstance make_instance(FunctionId function, int dimension, std::uint64_t instance_seed);

    /// Throws InputError on dimension mismatch. Defined on all of R^D.
    double evaluate(const ProblemInstance& instance, const Vector& x);

    /// f_value - f_opt, negative values clipped to 0.
    double precision(const ProblemInstance& instance, double f_value);

    /// Orthogonal matrix from Gram-Schmidt (Householder QR) of a Gaussian matrix,
    /// column signs fixed so the factorization is unique.
    Matrix random_rotation(int dimension, std::uint64_t seed);
}
