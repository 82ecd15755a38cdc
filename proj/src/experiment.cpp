#include "modde/experiment.hpp"

#include "modde/engine.hpp"
#include "modde/errors.hpp"
#include "modde/rng.hpp"
#include "modde/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

namespace modde::experiment
{
    std::uint64_t run_seed(std::uint64_t master, problems::FunctionId function, int dimension,
                           std::uint64_t instance, std::uint64_t repetition)
    {
        return mix_seed(master, {static_cast<std::uint64_t>(function), static_cast<std::uint64_t>(dimension),
                                 instance, repetition});
    }

    std::string sanitize_label(std::string_view label)
    {
        std::string out(label);
        for (auto& ch : out)
        {
            const auto c = static_cast<unsigned char>(ch);
            if (!(std::isalnum(c) || ch == '.' || ch == '_' || ch == '-'))
                ch = '_';
        }
        return out.empty() ? "config" : out;
    }

    std::string file_stem(const RunSpec& spec)
    {
        return sanitize_label(spec.label) + "_f" + std::to_string(static_cast<int>(spec.function)) + "_d" +
               std::to_string(spec.dimension) + "_i" + std::to_string(spec.instance) + "_r" +
               std::to_string(spec.repetition);
    }

    std::vector<RunSpec> plan(std::span<const std::string> labels,
                              const std::function<Configuration(const std::string&, int)>& make_config,
                              const Grid& grid)
    {
        std::vector<RunSpec> specs;
        for (const auto& label : labels)
            for (const auto fid : grid.functions)
                for (const int d : grid.dimensions)
                {
                    const auto config = make_config(label, d);
                    for (std::uint64_t i = 1; i <= grid.instances; ++i)
                        for (std::uint64_t r = 1; r <= grid.repetitions; ++r)
                            specs.push_back({label, config, fid, d, i, r, grid.budget,
                                             run_seed(grid.seed, fid, d, i, r)});
                }
        return specs;
    }

    metrics::RunLog execute(const RunSpec& spec)
    {
        const auto problem = problems::make_instance(spec.function, spec.dimension, spec.instance);
        RunOptions options;
        options.label = spec.label;
        return run(spec.config, problem, spec.budget, spec.seed, std::move(options)).log;
    }

    void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body)
    {
        jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
        if (jobs == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (;;)
                {
                    const auto i = next.fetch_add(1);
                    if (i >= n || failed.load())
                        return;
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        failed = true;
                    }
                }
            });
        for (auto& t : workers)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    std::vector<std::filesystem::path> run_batch(std::span<const RunSpec> specs, const std::filesystem::path& out,
                                                 unsigned jobs)
    {
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec)
            throw InputError("cannot create output directory '" + out.string() + "': " + ec.message());

        std::vector<std::filesystem::path> paths(specs.size());
        std::set<std::string> stems;
        for (std::size_t i = 0; i < specs.size(); ++i)
        {
            const auto stem = file_stem(specs[i]);
            if (!stems.insert(stem).second)
                throw InputError("two runs map to the same log file '" + stem + "'");
            paths[i] = out / (stem + ".csv");
        }

        parallel_for(specs.size(), jobs, [&](std::size_t i) { metrics::write_log(execute(specs[i]), paths[i]); });
        return paths;
    }

    LoadedLogs load_logs(const std::filesystem::path& dir)
    {
        if (!std::filesystem::is_directory(dir))
            throw InputError("'" + dir.string() + "' is not a directory");

        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv" &&
                std::filesystem::exists(metrics::metadata_path(entry.path())))
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());

        LoadedLogs out;
        for (const auto& f : files)
        {
            try
            {
                out.logs.push_back(metrics::read_log(f));
            }
            catch (const std::exception& e)
            {
                out.warnings.push_back("skipping " + f.string() + ": " + e.what());
            }
        }
        return out;
    }

    std::vector<ReportRow> report(std::span<const metrics::RunLog> logs, const metrics::TargetGrid& grid)
    {
        using Key = std::tuple<std::string, int, std::string, std::uint64_t>;
        std::map<Key, ReportRow> groups;
        for (std::size_t i = 0; i < logs.size(); ++i)
        {
            const auto& m = logs[i].metadata;
            auto& row = groups[Key{m.function, m.dimension, m.configuration, m.budget}];
            if (row.members.empty())
            {
                row.function = m.function;
                row.dimension = m.dimension;
                row.configuration = m.configuration;
                row.label = m.label;
                row.budget = m.budget;
            }
            row.members.push_back(i);
        }

        std::vector<ReportRow> rows;
        for (auto& [key, row] : groups)
        {
            std::vector<double> aocs;
            for (const auto i : row.members)
                aocs.push_back(metrics::aoc(logs.subspan(i, 1), grid, row.budget));
            row.runs = aocs.size();
            row.aoc_mean = stats::mean(aocs);
            row.aoc_std = stats::stddev(aocs);
            rows.push_back(std::move(row));
        }
        return rows;
    }

    void write_report_csv(std::span<const ReportRow> rows, std::ostream& out)
    {
        out << "function,dimension,configuration,runs,aoc_mean,aoc_std\n";
        for (const auto& r : rows)
            out << r.function << ',' << r.dimension << ',' << r.configuration << ',' << r.runs << ','
                << metrics::format_double(r.aoc_mean) << ',' << metrics::format_double(r.aoc_std) << '\n';
    }

    void write_labels_csv(std::span<const ReportRow> rows, std::ostream& out)
    {
        out << "configuration,label\n";
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& r : rows)
            if (seen.emplace(r.configuration, r.label).second)
                out << r.configuration << ',' << r.label << '\n';
    }

    std::vector<std::uint64_t> ecdf_sample_points(std::uint64_t budget, std::size_t count)
    {
        if (budget == 0)
            return {};
        count = std::max<std::size_t>(count, 2);
        std::vector<std::uint64_t> points;
        const double top = std::log(static_cast<double>(budget));
        for (std::size_t i = 0; i < count; ++i)
        {
            const double e = top * static_cast<double>(i) / static_cast<double>(count - 1);
            auto b = static_cast<std::uint64_t>(std::llround(std::exp(e)));
            b = std::clamp<std::uint64_t>(b, 1, budget);
            if (points.empty() || points.back() != b)
                points.push_back(b);
        }
        if (points.back() != budget)
            points.push_back(budget);
        return points;
    }

    void write_ecdf_csv(std::span<const ReportRow> rows, std::span<const metrics::RunLog> logs,
                        const metrics::TargetGrid& grid, std::ostream& out)
    {
        out << "function,dimension,configuration,evaluations,ecdf\n";
        for (const auto& r : rows)
        {
            std::vector<metrics::RunLog> group;
            for (const auto i : r.members)
                group.push_back(logs[i]);
            const auto curve = metrics::ecdf(group, grid, r.budget);
            for (const auto b : ecdf_sample_points(r.budget))
                out << r.function << ',' << r.dimension << ',' << r.configuration << ',' << b << ','
                    << metrics::format_double(curve(b)) << '\n';
        }
    }
}
