#include "modde/presets.hpp"

#include "modde/errors.hpp"

#include <algorithm>
#include <cctype>

namespace modde::presets
{
    namespace
    {
        bool iequals(std::string_view a, std::string_view b)
        {
            return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
                       return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
                   });
        }

        Configuration with(int dim, double f, double cr, int lambda)
        {
            auto c = default_configuration(dim);
            c.f = f;
            c.cr = cr;
            c.lambda = lambda;
            return c;
        }
    }

    Configuration common_variant(std::string_view name, int dim)
    {
        if (dim < 1)
            throw InputError("dimension must be >= 1");

        // "adaptive" F/CR columns start from 0.5 and feed the adaptation method
        if (iequals(name, "L-SHADE") || iequals(name, "SHADE"))
        {
            const bool lshade = iequals(name, "L-SHADE");
            auto c = with(dim, 0.5, 0.5, (lshade ? 18 : 10) * dim);
            c.base = BaseVector::target;
            c.ref = RefVector::pbest;
            c.archive = true;
            c.adapt_f = AdaptF::shade;
            c.adapt_cr = AdaptCR::shade;
            c.lpsr = lshade;
            return c;
        }
        if (iequals(name, "DAS1"))
            return with(dim, 0.8, 0.9, 10 * dim);
        if (iequals(name, "DAS2"))
        {
            auto c = with(dim, 0.8, 0.9, 10 * dim);
            c.base = BaseVector::target;
            c.ref = RefVector::best;
            return c;
        }
        if (iequals(name, "Qin1"))
            return with(dim, 0.9, 0.9, 50);
        if (iequals(name, "Qin2"))
            return with(dim, 0.5, 0.3, 50);
        if (iequals(name, "Qin3"))
        {
            auto c = with(dim, 0.5, 0.3, 50);
            c.ref = RefVector::best;
            return c;
        }
        if (iequals(name, "Qin4"))
        {
            auto c = with(dim, 0.5, 0.3, 50);
            c.ref = RefVector::best;
            c.diffs = 2;
            return c;
        }
        if (iequals(name, "Gamperle1") || iequals(name, "Gamperle2"))
        {
            const bool first = iequals(name, "Gamperle1");
            auto c = with(dim, first ? 0.45 : 0.6, first ? 0.4 : 0.9, 2 * dim);
            c.ref = RefVector::best;
            c.diffs = 2;
            // 2*D is below the 6 indices rand/2 with a best reference needs for D < 3
            c.lambda = std::max(c.lambda, required_distinct_indices(c) + 1);
            return c;
        }
        if (iequals(name, "jDE"))
        {
            auto c = with(dim, 0.5, 0.5, 100);
            c.adapt_f = AdaptF::jde;
            c.adapt_cr = AdaptCR::jde;
            return c;
        }
        throw ConfigurationError("unknown preset '" + std::string(name) + "'");
    }

    std::vector<NamedConfiguration> common_variants(int dim)
    {
        std::vector<NamedConfiguration> out;
        for (const auto name : kCommonVariants)
            out.push_back({std::string(name), common_variant(name, dim)});
        return out;
    }

    std::vector<NamedConfiguration> single_module_variants(int dim)
    {
        const auto base = [dim] {
            auto c = default_configuration(dim);
            c.f = 0.7;
            c.cr = 0.7;
            c.lambda = 10 * dim;
            return c;
        }();

        std::vector<NamedConfiguration> out;
        const auto add = [&](std::string name, auto&& modify) {
            auto c = base;
            modify(c);
            out.push_back({std::move(name), c});
        };
        const auto label = [](std::string_view field, auto option) {
            return std::string(field) + "=" + std::string(to_string(option));
        };

        for (const auto s : {Sampler::gaussian, Sampler::sobol, Sampler::halton})
            add(label("sampler", s), [s](Configuration& c) { c.sampler = s; });
        add("opposition=true", [](Configuration& c) { c.opposition = true; });
        for (const auto b : {BaseVector::best, BaseVector::target})
            add(label("base", b), [b](Configuration& c) { c.base = b; });
        for (const auto r : {RefVector::pbest, RefVector::best, RefVector::rand})
            add(label("ref", r), [r](Configuration& c) { c.ref = r; });
        add("diffs=2", [](Configuration& c) { c.diffs = 2; });
        add("weighted_f=true", [](Configuration& c) { c.weighted_f = true; });
        add("archive=true", [](Configuration& c) { c.archive = true; });
        add("crossover=exp", [](Configuration& c) { c.crossover = CrossoverMethod::exp; });
        add("eigen_x=true", [](Configuration& c) { c.eigen_x = true; });
        for (const auto s : {Sdis::none, Sdis::unif_resample, Sdis::cotn, Sdis::toroidal, Sdis::mirror, Sdis::hvb,
                             Sdis::expc_target, Sdis::expc_center, Sdis::exps})
            add(label("sdis", s), [s](Configuration& c) { c.sdis = s; });
        for (const auto a : {AdaptF::shade, AdaptF::shade_modified, AdaptF::jde})
            add(label("adapt_f", a), [a](Configuration& c) { c.adapt_f = a; });
        for (const auto a : {AdaptCR::shade, AdaptCR::jde})
            add(label("adapt_cr", a), [a](Configuration& c) { c.adapt_cr = a; });
        add("lpsr=true", [](Configuration& c) { c.lpsr = true; });
        add("caps=true", [](Configuration& c) { c.caps = true; });

        for (auto& v : out)
            v.config.lambda = std::max(v.config.lambda, required_distinct_indices(v.config) + 1);
        return out;
    }

    bool is_preset(std::string_view name, int dim)
    {
        try
        {
            (void)lookup(name, dim);
            return true;
        }
        catch (const ConfigurationError&)
        {
            return false;
        }
    }

    Configuration lookup(std::string_view name, int dim)
    {
        if (iequals(name, "default"))
            return default_configuration(dim);
        for (const auto common : kCommonVariants)
            if (iequals(name, common))
                return common_variant(name, dim);
        for (const auto& v : single_module_variants(dim))
            if (iequals(name, v.name))
                return v.config;
        throw ConfigurationError("unknown preset '" + std::string(name) + "'");
    }
}
