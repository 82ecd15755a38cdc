#pragma once

#include "modde/configuration.hpp"
#include "modde/rng.hpp"
#include "modde/types.hpp"

namespace modde::boundary
{
    /// COTN offsets are |N(0, width * kCotnSigmaFraction)|.
    inline constexpr double kCotnSigmaFraction = 0.01;

    struct Corrected
    {
        Vector x;
        bool feasible = true;
        int repaired = 0; // number of coordinates that were out of bounds
    };

    /// Distance from the violated bound drawn from an exponential with the
    /// given mean, truncated to [0, span]. Shared by expc_target, expc_center
    /// and exps: mean == span makes the attractor (or the far bound for exps)
    /// sit one mean away.
    double truncated_exponential(double mean, double span, Rng& rng);

    /// Repairs the coordinates of `trial` lying outside `domain`. Coordinates
    /// already inside are returned untouched. `target` is the parent (used by
    /// hvb and expc_target). For Sdis::none the trial is returned unchanged
    /// and flagged infeasible if any coordinate is out of bounds.
    Corrected correct(Sdis strategy, const Vector& trial, const Vector& target, const Domain& domain, Rng& rng);

    /// Single-coordinate form of correct().
    double correct_coordinate(Sdis strategy, double x, double target, double lower, double upper, Rng& rng);
}
