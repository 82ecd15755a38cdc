#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace modde
{
    enum class Sampler { gaussian, sobol, halton, uniform };
    enum class BaseVector { rand, best, target };
    enum class RefVector { none, pbest, best, rand };
    enum class CrossoverMethod { bin, exp };
    enum class Sdis { none, saturate, unif_resample, cotn, toroidal, mirror, hvb, expc_target, expc_center, exps };
    enum class AdaptF { none, shade, shade_modified, jde };
    enum class AdaptCR { none, shade, jde };

    inline constexpr int kMinLambda = 4;
    /// Upper end of the tunable population size range.
    inline constexpr int kMaxTunedLambda = 200;
    /// Hard cap accepted by validation; fixed-size presets (L-SHADE: 18*D) exceed kMaxTunedLambda.
    inline constexpr int kMaxLambda = 10000;

    /// 4 + floor(3 ln D).
    int default_lambda(int dim);

    /// One module option per field. Member initializers are the default module
    /// choices; use default_configuration(dim) to also get the default lambda.
    struct Configuration
    {
        Sampler sampler = Sampler::uniform;
        bool opposition = false;
        BaseVector base = BaseVector::rand;
        RefVector ref = RefVector::none;
        int diffs = 1;
        bool weighted_f = false;
        bool archive = false;
        CrossoverMethod crossover = CrossoverMethod::bin;
        bool eigen_x = false;
        Sdis sdis = Sdis::saturate;
        AdaptF adapt_f = AdaptF::none;
        AdaptCR adapt_cr = AdaptCR::none;
        bool lpsr = false;
        bool caps = false;
        int lambda = kMinLambda;
        double f = 0.5;
        double cr = 0.5;

        bool operator==(const Configuration&) const = default;
    };

    Configuration default_configuration(int dim);

    /// Number of mutually distinct population indices (besides the target)
    /// the mutation draws: 2*diffs + [base=rand] + [ref=rand].
    int required_distinct_indices(const Configuration& c);

    /// Throws ConfigurationError for any out-of-domain field and
    /// InfeasibleOperatorError when lambda - 1 < required_distinct_indices.
    void validate(const Configuration& c);
    bool is_valid(const Configuration& c) noexcept;

    /// Canonical key-value text: one `key = value` line per field, fixed order.
    std::string to_text(const Configuration& c);

    /// Parses the key-value grammar. Blank lines and `#` comments are ignored;
    /// every key must appear exactly once; unknown keys are errors.
    Configuration parse_configuration(std::string_view text, const std::string& source = "<config>");
    Configuration load_configuration(const std::string& path);
    void save_configuration(const Configuration& c, const std::string& path);

    /// 16 hex digits of FNV-1a over to_text(c).
    std::string digest(const Configuration& c);

    std::string_view to_string(Sampler v);
    std::string_view to_string(BaseVector v);
    std::string_view to_string(RefVector v);
    std::string_view to_string(CrossoverMethod v);
    std::string_view to_string(Sdis v);
    std::string_view to_string(AdaptF v);
    std::string_view to_string(AdaptCR v);

    /// Parse an option name; throws ConfigurationError on unknown names.
    template <typename Enum>
    Enum parse_option(std::string_view name);
}
