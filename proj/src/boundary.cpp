#include "modde/boundary.hpp"

#include "modde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace modde::boundary
{
    double truncated_exponential(double mean, double span, Rng& rng)
    {
        if (span <= 0.0 || mean <= 0.0)
            return 0.0;
        // inverse CDF of Exp(1/mean) restricted to [0, span]
        const double mass = -std::expm1(-span / mean);
        const double d = -mean * std::log1p(-rng.uniform() * mass);
        return std::min(d, span);
    }

    double correct_coordinate(Sdis strategy, double x, double target, double lower, double upper, Rng& rng)
    {
        if (x >= lower && x <= upper)
            return x;

        const double width = upper - lower;
        const bool below = x < lower;
        const double bound = below ? lower : upper;
        const double inward = below ? 1.0 : -1.0;

        switch (strategy)
        {
        case Sdis::none:
            return x;
        case Sdis::saturate:
            return bound;
        case Sdis::unif_resample:
            return lower + rng.uniform() * width;
        case Sdis::toroidal:
        {
            double r = std::fmod(x - lower, width);
            if (r < 0.0)
                r += width;
            return std::clamp(lower + r, lower, upper);
        }
        case Sdis::mirror:
        {
            double r = std::fmod(x - lower, 2.0 * width);
            if (r < 0.0)
                r += 2.0 * width;
            const double folded = r <= width ? r : 2.0 * width - r;
            return std::clamp(lower + folded, lower, upper);
        }
        case Sdis::hvb:
            return std::clamp((bound + target) / 2.0, lower, upper);
        case Sdis::expc_target:
        {
            const double span = std::abs(target - bound);
            return std::clamp(bound + inward * truncated_exponential(span, span, rng), lower, upper);
        }
        case Sdis::expc_center:
        {
            const double span = width / 2.0;
            return std::clamp(bound + inward * truncated_exponential(span, span, rng), lower, upper);
        }
        case Sdis::exps:
            return std::clamp(bound + inward * truncated_exponential(width, width, rng), lower, upper);
        case Sdis::cotn:
        {
            const double sigma = width * kCotnSigmaFraction;
            double offset;
            do
                offset = std::abs(rng.normal(0.0, sigma));
            while (offset > width);
            return bound + inward * offset;
        }
        }
        throw ConfigurationError("unknown boundary correction strategy");
    }

    Corrected correct(Sdis strategy, const Vector& trial, const Vector& target, const Domain& domain, Rng& rng)
    {
        if (trial.size() != domain.dim() || target.size() != domain.dim())
            throw InputError("boundary correction: dimension mismatch");

        Corrected out{trial, true, 0};
        for (Eigen::Index j = 0; j < trial.size(); ++j)
        {
            const double lo = domain.lower[j];
            const double hi = domain.upper[j];
            if (trial[j] >= lo && trial[j] <= hi)
                continue;
            ++out.repaired;
            out.x[j] = correct_coordinate(strategy, trial[j], target[j], lo, hi, rng);
        }
        if (strategy == Sdis::none)
            out.feasible = out.repaired == 0;
        return out;
    }
}
