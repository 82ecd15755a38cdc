#include "modde/problems.hpp"

#include "modde/errors.hpp"
#include "modde/rng.hpp"

#include <Eigen/QR>

#include <charconv>
#include <cmath>
#include <numbers>

namespace modde::problems
{
    namespace
    {
        constexpr std::uint64_t kInstanceSalt = 0x696e7374616e6365ULL;

        double rosenbrock_scale(int dim) { return std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0); }

        double axis_exponent(Eigen::Index i, int dim)
        {
            return dim > 1 ? static_cast<double>(i) / static_cast<double>(dim - 1) : 0.0;
        }
    }

    std::string_view to_string(FunctionId id)
    {
        switch (id)
        {
        case FunctionId::sphere:
            return "sphere";
        case FunctionId::ellipsoid:
            return "ellipsoid";
        case FunctionId::linear_slope:
            return "linear_slope";
        case FunctionId::rosenbrock:
            return "rosenbrock";
        case FunctionId::rastrigin:
            return "rastrigin";
        case FunctionId::shell:
            return "shell";
        }
        throw ConfigurationError("unknown function id");
    }

    FunctionId parse_function(std::string_view name)
    {
        for (const auto id : kSuite)
            if (to_string(id) == name)
                return id;
        int numeric = 0;
        const auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), numeric);
        if (ec == std::errc{} && p == name.data() + name.size())
            for (const auto id : kSuite)
                if (static_cast<int>(id) == numeric)
                    return id;
        throw ConfigurationError("unknown function '" + std::string(name) + "'");
    }

    Matrix random_rotation(int dimension, std::uint64_t seed)
    {
        Rng rng(seed);
        Matrix g(dimension, dimension);
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            for (Eigen::Index r = 0; r < g.rows(); ++r)
                g(r, c) = rng.normal();
        const Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index c = 0; c < q.cols(); ++c)
            if (rr(c, c) < 0.0)
                q.col(c) *= -1.0;
        return q;
    }

    ProblemInstance make_instance(FunctionId function, int dimension, std::uint64_t instance_seed)
    {
        (void)to_string(function);
        if (dimension < 2)
            throw InputError("suite functions need dimension >= 2");

        ProblemInstance p;
        p.function = function;
        p.dimension = dimension;
        p.instance_seed = instance_seed;
        p.f_opt = 0.0;
        p.domain = Domain::cube(static_cast<std::size_t>(dimension), -kDomainBound, kDomainBound);

        const auto seed = mix_seed(kInstanceSalt, {static_cast<std::uint64_t>(function),
                                                   static_cast<std::uint64_t>(dimension), instance_seed});
        Rng rng(seed);
        p.x_opt = Vector(dimension);
        p.rotation = Matrix::Identity(dimension, dimension);

        switch (function)
        {
        case FunctionId::linear_slope:
            p.slope_signs = Vector(dimension);
            for (Eigen::Index i = 0; i < dimension; ++i)
            {
                const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
                p.x_opt[i] = sign * kDomainBound;
                p.slope_signs[i] = sign;
            }
            break;
        case FunctionId::shell:
        {
            for (Eigen::Index i = 0; i < dimension; ++i)
                p.x_opt[i] = rng.normal();
            p.x_opt /= p.x_opt.norm();
            p.rotation = random_rotation(dimension, rng.next());
            break;
        }
        default:
            for (Eigen::Index i = 0; i < dimension; ++i)
                p.x_opt[i] = rng.uniform(-4.0, 4.0);
            if (function == FunctionId::rastrigin)
                p.rotation = random_rotation(dimension, rng.next());
            break;
        }
        return p;
    }

    double evaluate(const ProblemInstance& p, const Vector& x)
    {
        if (x.size() != p.dimension)
            throw InputError("evaluate: expected dimension " + std::to_string(p.dimension) + ", got " +
                             std::to_string(x.size()));
        const int dim = p.dimension;
        double f = 0.0;

        switch (p.function)
        {
        case FunctionId::sphere:
            f = (x - p.x_opt).squaredNorm();
            break;
        case FunctionId::ellipsoid:
        {
            const Vector z = x - p.x_opt;
            for (Eigen::Index i = 0; i < dim; ++i)
                f += std::pow(kEllipsoidCondition, axis_exponent(i, dim)) * z[i] * z[i];
            break;
        }
        case FunctionId::linear_slope:
            for (Eigen::Index i = 0; i < dim; ++i)
            {
                const double s = p.slope_signs[i] * std::pow(10.0, axis_exponent(i, dim));
                // beyond the optimum's bound the coordinate is clipped: flat
                const double z = p.x_opt[i] * x[i] < kDomainBound * kDomainBound ? x[i] : p.x_opt[i];
                f += kDomainBound * std::abs(s) - s * z;
            }
            break;
        case FunctionId::rosenbrock:
        {
            const Vector z = (rosenbrock_scale(dim) * (x - p.x_opt)).array() + 1.0;
            for (Eigen::Index i = 0; i + 1 < dim; ++i)
            {
                const double a = z[i] * z[i] - z[i + 1];
                const double b = z[i] - 1.0;
                f += 100.0 * a * a + b * b;
            }
            break;
        }
        case FunctionId::rastrigin:
        {
            const Vector z = p.rotation * (x - p.x_opt);
            double cos_sum = 0.0;
            for (Eigen::Index i = 0; i < dim; ++i)
                cos_sum += std::cos(2.0 * std::numbers::pi * z[i]);
            f = 10.0 * (dim - cos_sum) + z.squaredNorm();
            break;
        }
        case FunctionId::shell:
        {
            const Vector z = (rosenbrock_scale(dim) * (p.rotation * (x - p.x_opt))).array() + 1.0;
            double sum = 0.0;
            for (Eigen::Index i = 0; i + 1 < dim; ++i)
            {
                const double a = z[i] * z[i] - z[i + 1];
                const double b = z[i] - 1.0;
                const double s = 100.0 * a * a + b * b;
                sum += s / 4000.0 - std::cos(s);
            }
            f = 10.0 * sum / static_cast<double>(dim - 1) + 10.0;
            break;
        }
        }
        return f + p.f_opt;
    }

    double ProblemInstance::operator()(const Vector& x) const { return evaluate(*this, x); }

    double precision(const ProblemInstance& instance, double f_value)
    {
        const double d = f_value - instance.f_opt;
        return d > 0.0 ? d : 0.0;
    }
}
