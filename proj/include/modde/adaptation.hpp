#pragma once

#include "modde/configuration.hpp"
#include "modde/population.hpp"
#include "modde/rng.hpp"

#include <span>
#include <vector>

namespace modde::adaptation
{
    inline constexpr std::size_t kShadeMemorySize = 6;
    inline constexpr double kShadeScale = 0.1;
    inline constexpr double kJdeTau = 0.1;
    inline constexpr double kJdeFLower = 0.1;
    inline constexpr double kJdeFUpper = 1.0;

    /// Circular success-history memories M_F and M_CR.
    struct ShadeMemory
    {
        std::vector<double> m_f;
        std::vector<double> m_cr;
        std::size_t write_index = 0;

        explicit ShadeMemory(std::size_t h = kShadeMemorySize, double initial = 0.5)
            : m_f(h, initial), m_cr(h, initial)
        {
        }

        [[nodiscard]] std::size_t size() const { return m_f.size(); }
        bool operator==(const ShadeMemory&) const = default;
    };

    struct Success
    {
        double f;
        double cr;
        double improvement; // > 0
    };

    struct Parameters
    {
        double f;
        double cr;
    };

    /// Per-trial F and CR.
    ///   shade:          slot r uniform; F ~ Cauchy(M_F[r], 0.1) redrawn while <= 0, clipped to 1;
    ///                   CR ~ N(M_CR[r], 0.1) clipped to [0, 1]
    ///   shade_modified: as shade but the Cauchy location is the mean of M_F
    ///   jde:            personal F redrawn as 0.1 + 0.9u with probability tau,
    ///                   personal CR redrawn as u with probability tau
    ///   none:           the configured constants
    /// The jDE draws are returned, not written back; the engine commits them
    /// to the individual only when its trial survives.
    Parameters sample_parameters(AdaptF method_f, AdaptCR method_cr, const ShadeMemory& memory,
                                 const Individual& individual, double f, double cr, Rng& rng,
                                 double jde_tau = kJdeTau);

    /// Weighted Lehmer mean of F and weighted arithmetic mean of CR written
    /// to the current slot (weights proportional to the improvement). No-op
    /// for an empty success set.
    void shade_update(ShadeMemory& memory, std::span<const Success> successes);

    /// round(lambda_init + (lambda_min - lambda_init) * used / budget).
    int lpsr_size(int lambda_init, int lambda_min, std::uint64_t evaluations_used, std::uint64_t budget);

    /// jSO caps: F <= 0.7 before 60% of the budget; CR >= 0.7 before 25%, CR >= 0.6 before 50%.
    Parameters apply_caps(Parameters p, double progress);
}
