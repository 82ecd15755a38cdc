#include "modde/errors.hpp"
#include "modde/presets.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace modde;

namespace
{
    // Each row of the variant table, written out field by field.
    struct Row
    {
        const char* name;
        BaseVector base;
        RefVector ref;
        int diffs;
        double f, cr;
        int lambda_per_d; // 0: fixed lambda below
        int lambda_fixed;
        bool lpsr, archive, shade, jde;
    };

    constexpr Row kRows[] = {
        {"L-SHADE", BaseVector::target, RefVector::pbest, 1, 0.5, 0.5, 18, 0, true, true, true, false},
        {"SHADE", BaseVector::target, RefVector::pbest, 1, 0.5, 0.5, 10, 0, false, true, true, false},
        {"DAS1", BaseVector::rand, RefVector::none, 1, 0.8, 0.9, 10, 0, false, false, false, false},
        {"DAS2", BaseVector::target, RefVector::best, 1, 0.8, 0.9, 10, 0, false, false, false, false},
        {"Qin1", BaseVector::rand, RefVector::none, 1, 0.9, 0.9, 0, 50, false, false, false, false},
        {"Qin2", BaseVector::rand, RefVector::none, 1, 0.5, 0.3, 0, 50, false, false, false, false},
        {"Qin3", BaseVector::rand, RefVector::best, 1, 0.5, 0.3, 0, 50, false, false, false, false},
        {"Qin4", BaseVector::rand, RefVector::best, 2, 0.5, 0.3, 0, 50, false, false, false, false},
        {"Gamperle1", BaseVector::rand, RefVector::best, 2, 0.45, 0.4, 2, 0, false, false, false, false},
        {"Gamperle2", BaseVector::rand, RefVector::best, 2, 0.6, 0.9, 2, 0, false, false, false, false},
        {"jDE", BaseVector::rand, RefVector::none, 1, 0.5, 0.5, 0, 100, false, false, false, true},
    };

    Configuration expected(const Row& r, int dim)
    {
        Configuration c = default_configuration(dim);
        c.base = r.base;
        c.ref = r.ref;
        c.diffs = r.diffs;
        c.f = r.f;
        c.cr = r.cr;
        c.lambda = r.lambda_per_d ? r.lambda_per_d * dim : r.lambda_fixed;
        c.lpsr = r.lpsr;
        c.archive = r.archive;
        if (r.shade)
        {
            c.adapt_f = AdaptF::shade;
            c.adapt_cr = AdaptCR::shade;
        }
        if (r.jde)
        {
            c.adapt_f = AdaptF::jde;
            c.adapt_cr = AdaptCR::jde;
        }
        return c;
    }

    int differing_categorical_fields(const Configuration& a, const Configuration& b)
    {
        return (a.sampler != b.sampler) + (a.opposition != b.opposition) + (a.base != b.base) + (a.ref != b.ref) +
               (a.diffs != b.diffs) + (a.weighted_f != b.weighted_f) + (a.archive != b.archive) +
               (a.crossover != b.crossover) + (a.eigen_x != b.eigen_x) + (a.sdis != b.sdis) +
               (a.adapt_f != b.adapt_f) + (a.adapt_cr != b.adapt_cr) + (a.lpsr != b.lpsr) + (a.caps != b.caps);
    }
}

TEST_SUITE("presets")
{
    TEST_CASE("common variants match the variant table")
    {
        for (const int dim : {5, 10, 20})
            for (const auto& row : kRows)
            {
                CAPTURE(row.name);
                CHECK(presets::common_variant(row.name, dim) == expected(row, dim));
            }
        CHECK(presets::common_variants(5).size() == 11);
    }

    TEST_CASE("named examples")
    {
        const auto shade = presets::common_variant("SHADE", 5);
        CHECK(shade.lambda == 50);
        CHECK(shade.archive);
        CHECK(shade.adapt_f == AdaptF::shade);
        CHECK(shade.adapt_cr == AdaptCR::shade);
        CHECK_FALSE(shade.lpsr);

        auto das1 = presets::common_variant("DAS1", 5);
        CHECK(das1.f == 0.8);
        CHECK(das1.cr == 0.9);
        CHECK(das1.lambda == 50);
        das1.f = das1.cr = 0.5;
        das1.lambda = default_lambda(5);
        CHECK(das1 == default_configuration(5));

        const auto g2 = presets::common_variant("Gamperle2", 5);
        CHECK(g2.ref == RefVector::best);
        CHECK(g2.diffs == 2);
        CHECK(g2.f == 0.6);
        CHECK(g2.cr == 0.9);
        CHECK(g2.lambda == 10);
    }

    TEST_CASE("names are case-insensitive and unknown names fail")
    {
        CHECK(presets::common_variant("l-shade", 5) == presets::common_variant("L-SHADE", 5));
        CHECK_THROWS_AS(presets::common_variant("CMA-ES", 5), ConfigurationError);
        CHECK_THROWS_AS(presets::lookup("nope", 5), ConfigurationError);
        CHECK_FALSE(presets::is_preset("nope", 5));
        CHECK(presets::is_preset("default", 5));
        CHECK(presets::is_preset("sdis=mirror", 5));
        CHECK(presets::lookup("default", 7) == default_configuration(7));
    }

    TEST_CASE("thirty single-module variants, one field each")
    {
        for (const int dim : {2, 5, 10, 20})
        {
            const auto variants = presets::single_module_variants(dim);
            REQUIRE(variants.size() == 30);
            const auto base = default_configuration(dim);
            std::set<std::string> names;
            std::set<std::string> digests;
            int toroidal = 0;
            for (const auto& v : variants)
            {
                CAPTURE(v.name);
                CHECK(differing_categorical_fields(v.config, base) == 1);
                CHECK(v.config.f == 0.7);
                CHECK(v.config.cr == 0.7);
                CHECK(v.config.lambda == 10 * dim);
                names.insert(v.name);
                digests.insert(digest(v.config));
                toroidal += v.name == "sdis=toroidal";
            }
            CHECK(names.size() == 30);
            CHECK(digests.size() == 30);
            CHECK(toroidal == 1);
        }
    }

    TEST_CASE("every preset validates")
    {
        for (int dim = 1; dim <= 40; ++dim)
        {
            for (const auto& v : presets::common_variants(dim))
                CHECK_NOTHROW(validate(v.config));
            if (dim >= 2)
                for (const auto& v : presets::single_module_variants(dim))
                    CHECK_NOTHROW(validate(v.config));
        }
    }

    TEST_CASE("preset digests match the golden file")
    {
        std::ifstream in(std::string(MODDE_TEST_DATA_DIR) + "/preset_digests_d5.txt");
        REQUIRE(in.good());
        std::map<std::string, std::string> golden;
        std::string line;
        std::getline(in, line);
        CHECK(line == "name,configuration");
        while (std::getline(in, line))
        {
            const auto comma = line.find(',');
            REQUIRE(comma != std::string::npos);
            golden[line.substr(0, comma)] = line.substr(comma + 1);
        }
        REQUIRE(golden.size() == 42);
        CHECK(golden.at("default") == digest(default_configuration(5)));
        for (const auto& v : presets::common_variants(5))
            CHECK(golden.at(v.name) == digest(v.config));
        for (const auto& v : presets::single_module_variants(5))
            CHECK(golden.at(v.name) == digest(v.config));
    }
}
