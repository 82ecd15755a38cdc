#pragma once

#include "modde/types.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace modde
{
    struct Individual
    {
        Vector x;
        double fitness = std::numeric_limits<double>::quiet_NaN();
        // personal control parameters, only rewritten by jDE
        double f = 0.5;
        double cr = 0.5;
        bool feasible = true;

        [[nodiscard]] bool evaluated() const { return fitness == fitness; }
    };

    struct Population
    {
        std::vector<Individual> members;
        std::vector<Individual> archive;
        std::uint64_t generation = 0;
        std::uint64_t evaluations_used = 0;

        [[nodiscard]] std::size_t size() const { return members.size(); }
        [[nodiscard]] std::size_t best_index() const;
    };

    /// Index of the lowest fitness (first one on ties).
    std::size_t best_index(std::span<const Individual> members);

    inline std::size_t Population::best_index() const { return modde::best_index(members); }
}
