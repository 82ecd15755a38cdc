#pragma once

#include "modde/configuration.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace modde::presets
{
    inline constexpr std::array<std::string_view, 11> kCommonVariants{
        "L-SHADE", "SHADE", "DAS1", "DAS2", "Qin1", "Qin2", "Qin3", "Qin4", "Gamperle1", "Gamperle2", "jDE"};

    struct NamedConfiguration
    {
        std::string name;
        Configuration config;
    };

    /// Common DE variants expressed over the default module choices.
    /// Name matching is case-insensitive. Throws ConfigurationError on unknown names.
    Configuration common_variant(std::string_view name, int dim);

    std::vector<NamedConfiguration> common_variants(int dim);

    /// Every non-default categorical option enabled alone on top of the
    /// defaults, with F = CR = 0.7 and lambda = 10 * D. Exactly 30 variants,
    /// named `field=option`.
    std::vector<NamedConfiguration> single_module_variants(int dim);

    /// `default`, a common variant name, or a single-module variant name.
    bool is_preset(std::string_view name, int dim);
    Configuration lookup(std::string_view name, int dim);
}
