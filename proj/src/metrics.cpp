#include "modde/metrics.hpp"

#include "modde/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

namespace modde::metrics
{
    namespace
    {
        std::string trim(const std::string& s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        bool parse_u64(const std::string& s, std::uint64_t& out)
        {
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc{} && p == s.data() + s.size();
        }

        bool parse_double(const std::string& s, double& out)
        {
            if (s.empty())
                return false;
            char* end = nullptr;
            out = std::strtod(s.c_str(), &end);
            return end == s.c_str() + s.size();
        }
    }

    std::string format_double(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    bool RunLog::record(std::uint64_t evaluations, double precision)
    {
        if (!records.empty() && !(precision < records.back().best_precision))
            return false;
        if (!records.empty() && evaluations <= records.back().evaluations)
            return false;
        records.push_back({evaluations, precision});
        return true;
    }

    double RunLog::precision_at(std::uint64_t evaluations) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : records)
        {
            if (r.evaluations > evaluations)
                break;
            best = r.best_precision;
        }
        return best;
    }

    TargetGrid TargetGrid::standard()
    {
        TargetGrid g;
        for (int k = 0; k <= 80; ++k)
            g.targets.push_back(std::pow(10.0, static_cast<double>(40 - k) / 5.0));
        return g;
    }

    TargetGrid TargetGrid::log_spaced(double upper, double lower, std::size_t count)
    {
        if (!(upper > 0.0 && lower > 0.0 && upper >= lower) || count == 0)
            throw InputError("target grid needs 0 < lower <= upper and count >= 1");
        TargetGrid g;
        const double hi = std::log10(upper);
        const double lo = std::log10(lower);
        for (std::size_t k = 0; k < count; ++k)
        {
            const double e = count == 1 ? hi : hi + (lo - hi) * static_cast<double>(k) / static_cast<double>(count - 1);
            g.targets.push_back(std::pow(10.0, e));
        }
        return g;
    }

    Ecdf::Ecdf(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget) : budget_(budget)
    {
        if (logs.empty())
            throw InputError("ECDF needs at least one run log");
        if (grid.targets.empty())
            throw InputError("ECDF needs at least one target");
        if (budget == 0)
            throw InputError("ECDF budget must be positive");
        const auto& ref = logs.front().metadata;
        for (const auto& log : logs)
            if (log.metadata.dimension != ref.dimension || log.metadata.budget != ref.budget)
                throw InputError("logs in one ECDF must share dimension and budget");

        hit_times_.reserve(logs.size() * grid.size());
        for (const auto& log : logs)
            for (const double t : grid.targets)
            {
                std::uint64_t hit = budget + 1;
                for (const auto& r : log.records)
                {
                    if (r.evaluations > budget)
                        break;
                    if (r.best_precision <= t)
                    {
                        hit = std::max<std::uint64_t>(r.evaluations, 1);
                        break;
                    }
                }
                hit_times_.push_back(hit);
            }
        std::sort(hit_times_.begin(), hit_times_.end());
    }

    double Ecdf::operator()(std::uint64_t b) const
    {
        const auto hits = std::upper_bound(hit_times_.begin(), hit_times_.end(), b) - hit_times_.begin();
        return static_cast<double>(hits) / static_cast<double>(hit_times_.size());
    }

    double Ecdf::aoc() const
    {
        // Each pair with first hit h contributes (h - 1) evaluations of missing area (B if never hit).
        long double area = 0.0L;
        for (const auto h : hit_times_)
            area += static_cast<long double>(h - 1);
        return static_cast<double>(area / (static_cast<long double>(budget_) * hit_times_.size()));
    }

    Ecdf ecdf(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget)
    {
        return Ecdf(logs, grid, budget);
    }

    double aoc(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget)
    {
        return Ecdf(logs, grid, budget).aoc();
    }

    void write_log_csv(const RunLog& log, std::ostream& out)
    {
        out << "evaluations,best_precision\n";
        for (const auto& r : log.records)
            out << r.evaluations << ',' << format_double(r.best_precision) << '\n';
    }

    RunLog read_log_csv(std::istream& in, const std::string& source)
    {
        RunLog log;
        std::string line;
        std::size_t line_no = 0;
        if (!std::getline(in, line))
            throw ParseError(source, 1, "empty log file");
        ++line_no;
        if (trim(line) != "evaluations,best_precision")
            throw ParseError(source, line_no, "expected header 'evaluations,best_precision'");

        while (std::getline(in, line))
        {
            ++line_no;
            const auto t = trim(line);
            if (t.empty())
                continue;
            const auto comma = t.find(',');
            if (comma == std::string::npos)
                throw ParseError(source, line_no, "expected two comma-separated fields");
            LogRecord r{};
            if (!parse_u64(t.substr(0, comma), r.evaluations))
                throw ParseError(source, line_no, "bad evaluation count '" + t.substr(0, comma) + "'");
            if (!parse_double(t.substr(comma + 1), r.best_precision))
                throw ParseError(source, line_no, "bad precision '" + t.substr(comma + 1) + "'");
            if (!log.records.empty() && (r.evaluations <= log.records.back().evaluations ||
                                         !(r.best_precision < log.records.back().best_precision)))
                throw ParseError(source, line_no, "records must improve strictly");
            log.records.push_back(r);
        }
        return log;
    }

    void write_metadata(const RunMetadata& m, std::ostream& out)
    {
        out << "function = " << m.function << '\n'
            << "instance = " << m.instance << '\n'
            << "dimension = " << m.dimension << '\n'
            << "configuration = " << m.configuration << '\n'
            << "label = " << m.label << '\n'
            << "run_seed = " << m.run_seed << '\n'
            << "budget = " << m.budget << '\n';
    }

    RunMetadata read_metadata(std::istream& in, const std::string& source)
    {
        std::map<std::string, std::string> kv;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            const auto t = trim(line);
            if (t.empty() || t.front() == '#')
                continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError(source, line_no, "expected 'key = value'");
            kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
        }

        RunMetadata m;
        const auto need = [&](const char* key) -> const std::string& {
            const auto it = kv.find(key);
            if (it == kv.end())
                throw ParseError(source, line_no, std::string("missing key '") + key + "'");
            return it->second;
        };
        const auto need_u64 = [&](const char* key) {
            std::uint64_t v{};
            if (!parse_u64(need(key), v))
                throw ParseError(source, line_no, std::string("bad integer for '") + key + "'");
            return v;
        };
        m.function = need("function");
        m.instance = need_u64("instance");
        m.dimension = static_cast<int>(need_u64("dimension"));
        m.configuration = need("configuration");
        m.run_seed = need_u64("run_seed");
        m.budget = need_u64("budget");
        if (kv.contains("label"))
            m.label = kv.at("label");
        return m;
    }

    std::filesystem::path metadata_path(const std::filesystem::path& csv)
    {
        auto p = csv;
        p.replace_extension(".meta");
        return p;
    }

    void write_log(const RunLog& log, const std::filesystem::path& csv)
    {
        {
            std::ofstream out(csv);
            if (!out)
                throw InputError("cannot write '" + csv.string() + "'");
            write_log_csv(log, out);
            if (!out)
                throw InputError("failed writing '" + csv.string() + "'");
        }
        const auto meta = metadata_path(csv);
        std::ofstream out(meta);
        if (!out)
            throw InputError("cannot write '" + meta.string() + "'");
        write_metadata(log.metadata, out);
    }

    RunLog read_log(const std::filesystem::path& csv)
    {
        std::ifstream in(csv);
        if (!in)
            throw InputError("cannot open '" + csv.string() + "'");
        auto log = read_log_csv(in, csv.string());

        const auto meta = metadata_path(csv);
        std::ifstream min(meta);
        if (!min)
            throw InputError("missing metadata sidecar '" + meta.string() + "'");
        log.metadata = read_metadata(min, meta.string());
        return log;
    }
}
