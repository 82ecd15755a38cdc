#include "modde/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modde::adaptation
{
    Parameters sample_parameters(AdaptF method_f, AdaptCR method_cr, const ShadeMemory& memory,
                                 const Individual& individual, double f, double cr, Rng& rng, double jde_tau)
    {
        Parameters out{f, cr};

        const bool needs_slot = method_f == AdaptF::shade || method_cr == AdaptCR::shade;
        const std::size_t slot = needs_slot ? rng.index(memory.size()) : 0;

        switch (method_f)
        {
        case AdaptF::none:
            break;
        case AdaptF::shade:
        case AdaptF::shade_modified:
        {
            const double location =
                method_f == AdaptF::shade
                    ? memory.m_f[slot]
                    : std::accumulate(memory.m_f.begin(), memory.m_f.end(), 0.0) /
                          static_cast<double>(memory.size());
            double v;
            do
                v = rng.cauchy(location, kShadeScale);
            while (v <= 0.0);
            out.f = std::min(v, 1.0);
            break;
        }
        case AdaptF::jde:
            out.f = rng.bernoulli(jde_tau) ? kJdeFLower + (kJdeFUpper - kJdeFLower) * rng.uniform() : individual.f;
            break;
        }

        switch (method_cr)
        {
        case AdaptCR::none:
            break;
        case AdaptCR::shade:
            out.cr = std::clamp(rng.normal(memory.m_cr[slot], kShadeScale), 0.0, 1.0);
            break;
        case AdaptCR::jde:
            out.cr = rng.bernoulli(jde_tau) ? rng.uniform() : individual.cr;
            break;
        }
        return out;
    }

    void shade_update(ShadeMemory& memory, std::span<const Success> successes)
    {
        if (successes.empty())
            return;

        double total = 0.0;
        for (const auto& s : successes)
            total += s.improvement;

        double f_num = 0.0, f_den = 0.0, cr_mean = 0.0;
        for (const auto& s : successes)
        {
            const double w = total > 0.0 ? s.improvement / total : 1.0 / static_cast<double>(successes.size());
            f_num += w * s.f * s.f;
            f_den += w * s.f;
            cr_mean += w * s.cr;
        }

        if (f_den > 0.0)
            memory.m_f[memory.write_index] = f_num / f_den;
        memory.m_cr[memory.write_index] = cr_mean;
        memory.write_index = (memory.write_index + 1) % memory.size();
    }

    int lpsr_size(int lambda_init, int lambda_min, std::uint64_t evaluations_used, std::uint64_t budget)
    {
        if (budget == 0)
            return lambda_init;
        const double t = std::min(1.0, static_cast<double>(evaluations_used) / static_cast<double>(budget));
        const double size = lambda_init + (lambda_min - lambda_init) * t;
        return static_cast<int>(std::lround(size));
    }

    Parameters apply_caps(Parameters p, double progress)
    {
        if (progress < 0.6)
            p.f = std::min(p.f, 0.7);
        if (progress < 0.25)
            p.cr = std::max(p.cr, 0.7);
        else if (progress < 0.5)
            p.cr = std::max(p.cr, 0.6);
        return p;
    }
}
