#include "modde/configuration.hpp"

#include "modde/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace modde
{
    namespace
    {
        template <typename Enum, std::size_t N>
        using Names = std::array<std::pair<Enum, std::string_view>, N>;

        constexpr Names<Sampler, 4> sampler_names{{
            {Sampler::gaussian, "gaussian"}, {Sampler::sobol, "sobol"},
            {Sampler::halton, "halton"}, {Sampler::uniform, "uniform"}}};
        constexpr Names<BaseVector, 3> base_names{{
            {BaseVector::rand, "rand"}, {BaseVector::best, "best"}, {BaseVector::target, "target"}}};
        constexpr Names<RefVector, 4> ref_names{{
            {RefVector::none, "none"}, {RefVector::pbest, "pbest"},
            {RefVector::best, "best"}, {RefVector::rand, "rand"}}};
        constexpr Names<CrossoverMethod, 2> crossover_names{{
            {CrossoverMethod::bin, "bin"}, {CrossoverMethod::exp, "exp"}}};
        constexpr Names<Sdis, 10> sdis_names{{
            {Sdis::none, "none"}, {Sdis::saturate, "saturate"}, {Sdis::unif_resample, "unif_resample"},
            {Sdis::cotn, "cotn"}, {Sdis::toroidal, "toroidal"}, {Sdis::mirror, "mirror"},
            {Sdis::hvb, "hvb"}, {Sdis::expc_target, "expc_target"}, {Sdis::expc_center, "expc_center"},
            {Sdis::exps, "exps"}}};
        constexpr Names<AdaptF, 4> adapt_f_names{{
            {AdaptF::none, "none"}, {AdaptF::shade, "shade"},
            {AdaptF::shade_modified, "shade_modified"}, {AdaptF::jde, "jde"}}};
        constexpr Names<AdaptCR, 3> adapt_cr_names{{
            {AdaptCR::none, "none"}, {AdaptCR::shade, "shade"}, {AdaptCR::jde, "jde"}}};

        template <typename Enum, std::size_t N>
        std::string_view lookup(const Names<Enum, N>& names, Enum v)
        {
            for (const auto& [e, n] : names)
                if (e == v)
                    return n;
            throw ConfigurationError("enum value out of range");
        }

        std::string normalize(std::string_view s)
        {
            std::string out(s);
            for (auto& ch : out)
            {
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
                if (ch == '-')
                    ch = '_';
            }
            return out;
        }

        template <typename Enum, std::size_t N>
        Enum reverse_lookup(const Names<Enum, N>& names, std::string_view s, std::string_view what)
        {
            const auto key = normalize(s);
            for (const auto& [e, n] : names)
                if (n == key)
                    return e;
            throw ConfigurationError("unknown " + std::string(what) + " option '" + std::string(s) + "'");
        }

        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        std::string format_real(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        bool parse_bool(const std::string& v)
        {
            const auto n = normalize(v);
            if (n == "true" || n == "1")
                return true;
            if (n == "false" || n == "0")
                return false;
            throw ConfigurationError("expected true/false, got '" + v + "'");
        }

        int parse_int(const std::string& v)
        {
            int out{};
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc{} || p != v.data() + v.size())
                throw ConfigurationError("expected an integer, got '" + v + "'");
            return out;
        }

        double parse_real(const std::string& v)
        {
            std::size_t used = 0;
            double out{};
            try
            {
                out = std::stod(v, &used);
            }
            catch (const std::exception&)
            {
                used = 0;
            }
            if (used != v.size() || v.empty())
                throw ConfigurationError("expected a real number, got '" + v + "'");
            return out;
        }
    }

    std::string_view to_string(Sampler v) { return lookup(sampler_names, v); }
    std::string_view to_string(BaseVector v) { return lookup(base_names, v); }
    std::string_view to_string(RefVector v) { return lookup(ref_names, v); }
    std::string_view to_string(CrossoverMethod v) { return lookup(crossover_names, v); }
    std::string_view to_string(Sdis v) { return lookup(sdis_names, v); }
    std::string_view to_string(AdaptF v) { return lookup(adapt_f_names, v); }
    std::string_view to_string(AdaptCR v) { return lookup(adapt_cr_names, v); }

    template <>
    Sampler parse_option<Sampler>(std::string_view s) { return reverse_lookup(sampler_names, s, "sampler"); }
    template <>
    BaseVector parse_option<BaseVector>(std::string_view s) { return reverse_lookup(base_names, s, "base"); }
    template <>
    RefVector parse_option<RefVector>(std::string_view s) { return reverse_lookup(ref_names, s, "ref"); }
    template <>
    CrossoverMethod parse_option<CrossoverMethod>(std::string_view s)
    {
        return reverse_lookup(crossover_names, s, "crossover");
    }
    template <>
    Sdis parse_option<Sdis>(std::string_view s) { return reverse_lookup(sdis_names, s, "sdis"); }
    template <>
    AdaptF parse_option<AdaptF>(std::string_view s) { return reverse_lookup(adapt_f_names, s, "adapt_f"); }
    template <>
    AdaptCR parse_option<AdaptCR>(std::string_view s) { return reverse_lookup(adapt_cr_names, s, "adapt_cr"); }

    int default_lambda(int dim)
    {
        if (dim < 1)
            throw InputError("dimension must be >= 1");
        return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim))));
    }

    Configuration default_configuration(int dim)
    {
        Configuration c;
        c.lambda = default_lambda(dim);
        return c;
    }

    int required_distinct_indices(const Configuration& c)
    {
        return 2 * c.diffs + (c.base == BaseVector::rand ? 1 : 0) + (c.ref == RefVector::rand ? 1 : 0);
    }

    void validate(const Configuration& c)
    {
        // enum fields: to_string throws on values outside the declared set
        (void)to_string(c.sampler);
        (void)to_string(c.base);
        (void)to_string(c.ref);
        (void)to_string(c.crossover);
        (void)to_string(c.sdis);
        (void)to_string(c.adapt_f);
        (void)to_string(c.adapt_cr);

        if (c.diffs != 1 && c.diffs != 2)
            throw ConfigurationError("diffs must be 1 or 2, got " + std::to_string(c.diffs));
        if (c.lambda < kMinLambda || c.lambda > kMaxLambda)
            throw ConfigurationError("lambda must be in [" + std::to_string(kMinLambda) + ", " +
                                     std::to_string(kMaxLambda) + "], got " + std::to_string(c.lambda));
        if (!(c.f >= 0.0 && c.f <= 2.0))
            throw ConfigurationError("f must be in [0, 2], got " + format_real(c.f));
        if (!(c.cr >= 0.0 && c.cr <= 1.0))
            throw ConfigurationError("cr must be in [0, 1], got " + format_real(c.cr));

        const int need = required_distinct_indices(c);
        if (c.lambda - 1 < need)
            throw InfeasibleOperatorError("mutation needs " + std::to_string(need) +
                                          " distinct indices besides the target; lambda=" +
                                          std::to_string(c.lambda) + " is too small");
    }

    bool is_valid(const Configuration& c) noexcept
    {
        try
        {
            validate(c);
            return true;
        }
        catch (const std::exception&)
        {
            return false;
        }
    }

    std::string to_text(const Configuration& c)
    {
        std::ostringstream os;
        const auto b = [](bool v) { return v ? "true" : "false"; };
        os << "sampler = " << to_string(c.sampler) << '\n'
           << "opposition = " << b(c.opposition) << '\n'
           << "base = " << to_string(c.base) << '\n'
           << "ref = " << to_string(c.ref) << '\n'
           << "diffs = " << c.diffs << '\n'
           << "weighted_f = " << b(c.weighted_f) << '\n'
           << "archive = " << b(c.archive) << '\n'
           << "crossover = " << to_string(c.crossover) << '\n'
           << "eigen_x = " << b(c.eigen_x) << '\n'
           << "sdis = " << to_string(c.sdis) << '\n'
           << "adapt_f = " << to_string(c.adapt_f) << '\n'
           << "adapt_cr = " << to_string(c.adapt_cr) << '\n'
           << "lpsr = " << b(c.lpsr) << '\n'
           << "caps = " << b(c.caps) << '\n'
           << "lambda = " << c.lambda << '\n'
           << "f = " << format_real(c.f) << '\n'
           << "cr = " << format_real(c.cr) << '\n';
        return os.str();
    }

    Configuration parse_configuration(std::string_view text, const std::string& source)
    {
        static const std::array<std::string_view, 17> keys{
            "sampler", "opposition", "base", "ref", "diffs", "weighted_f", "archive", "crossover", "eigen_x",
            "sdis", "adapt_f", "adapt_cr", "lpsr", "caps", "lambda", "f", "cr"};

        std::map<std::string, std::pair<std::string, std::size_t>> values;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto nl = text.find('\n', pos);
            const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;

            auto line = trim(raw.substr(0, raw.find('#')));
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(source, line_no, "expected 'key = value'");
            const auto key = trim(std::string_view(line).substr(0, eq));
            const auto value = trim(std::string_view(line).substr(eq + 1));
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ParseError(source, line_no, "unknown key '" + key + "'");
            if (values.contains(key))
                throw ParseError(source, line_no, "duplicate key '" + key + "'");
            values.emplace(key, std::make_pair(value, line_no));
        }

        for (const auto k : keys)
            if (!values.contains(std::string(k)))
                throw ParseError(source, line_no, "missing key '" + std::string(k) + "'");

        Configuration c;
        const auto field = [&](const char* key, auto&& assign) {
            const auto& [value, line] = values.at(key);
            try
            {
                assign(value);
            }
            catch (const ConfigurationError& e)
            {
                throw ParseError(source, line, e.what());
            }
        };
        field("sampler", [&](const std::string& v) { c.sampler = parse_option<Sampler>(v); });
        field("opposition", [&](const std::string& v) { c.opposition = parse_bool(v); });
        field("base", [&](const std::string& v) { c.base = parse_option<BaseVector>(v); });
        field("ref", [&](const std::string& v) { c.ref = parse_option<RefVector>(v); });
        field("diffs", [&](const std::string& v) { c.diffs = parse_int(v); });
        field("weighted_f", [&](const std::string& v) { c.weighted_f = parse_bool(v); });
        field("archive", [&](const std::string& v) { c.archive = parse_bool(v); });
        field("crossover", [&](const std::string& v) { c.crossover = parse_option<CrossoverMethod>(v); });
        field("eigen_x", [&](const std::string& v) { c.eigen_x = parse_bool(v); });
        field("sdis", [&](const std::string& v) { c.sdis = parse_option<Sdis>(v); });
        field("adapt_f", [&](const std::string& v) { c.adapt_f = parse_option<AdaptF>(v); });
        field("adapt_cr", [&](const std::string& v) { c.adapt_cr = parse_option<AdaptCR>(v); });
        field("lpsr", [&](const std::string& v) { c.lpsr = parse_bool(v); });
        field("caps", [&](const std::string& v) { c.caps = parse_bool(v); });
        field("lambda", [&](const std::string& v) { c.lambda = parse_int(v); });
        field("f", [&](const std::string& v) { c.f = parse_real(v); });
        field("cr", [&](const std::string& v) { c.cr = parse_real(v); });

        validate(c);
        return c;
    }

    Configuration load_configuration(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw InputError("cannot open configuration file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_configuration(ss.str(), path);
    }

    void save_configuration(const Configuration& c, const std::string& path)
    {
        std::ofstream out(path);
        if (!out)
            throw InputError("cannot write configuration file '" + path + "'");
        out << to_text(c);
        if (!out)
            throw InputError("failed writing '" + path + "'");
    }

    std::string digest(const Configuration& c)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const unsigned char ch : to_text(c))
        {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
}
