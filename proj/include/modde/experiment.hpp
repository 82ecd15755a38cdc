#pragma once

#include "modde/configuration.hpp"
#include "modde/metrics.hpp"
#include "modde/presets.hpp"
#include "modde/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace modde::experiment
{
    /// One DE run of a batch.
    struct RunSpec
    {
        std::string label;
        Configuration config;
        problems::FunctionId function = problems::FunctionId::sphere;
        int dimension = 0;
        std::uint64_t instance = 1;
        std::uint64_t repetition = 1;
        std::uint64_t budget = 0;
        std::uint64_t seed = 0;
    };

    /// Seed of one run. Independent of the configuration, so every
    /// configuration sees the same stream on the same (instance, repetition).
    std::uint64_t run_seed(std::uint64_t master, problems::FunctionId function, int dimension,
                           std::uint64_t instance, std::uint64_t repetition);

    /// Characters outside [A-Za-z0-9._-] become '_'.
    std::string sanitize_label(std::string_view label);

    /// `<label>_f<fid>_d<D>_i<instance>_r<rep>`
    std::string file_stem(const RunSpec& spec);

    struct Grid
    {
        std::vector<problems::FunctionId> functions;
        std::vector<int> dimensions;
        std::uint64_t instances = 10; // ids 1..instances
        std::uint64_t repetitions = 5;
        std::uint64_t budget = 50000;
        std::uint64_t seed = 0;
    };

    /// Configurations are built per dimension from `make_config`, so presets
    /// whose lambda depends on D can be planned over several dimensions.
    /// Order: configuration, function, dimension, instance, repetition.
    std::vector<RunSpec> plan(std::span<const std::string> labels,
                              const std::function<Configuration(const std::string&, int)>& make_config,
                              const Grid& grid);

    /// Runs one spec; the returned log carries full metadata.
    metrics::RunLog execute(const RunSpec& spec);

    /// Calls body(i) for i in [0, n) on `jobs` worker threads. The first
    /// exception thrown by any body is rethrown after all workers join.
    void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

    /// Executes every spec and writes `<out>/<stem>.csv` plus its `.meta`
    /// sidecar. Returns the csv paths in spec order.
    std::vector<std::filesystem::path> run_batch(std::span<const RunSpec> specs, const std::filesystem::path& out,
                                                 unsigned jobs = 1);

    struct LoadedLogs
    {
        std::vector<metrics::RunLog> logs;
        std::vector<std::string> warnings; // one per skipped file
    };

    /// Reads every `*.csv` with a `.meta` sidecar under `dir` (recursively),
    /// in path order. Unreadable or malformed files are skipped with a warning.
    LoadedLogs load_logs(const std::filesystem::path& dir);

    struct ReportRow
    {
        std::string function;
        int dimension = 0;
        std::string configuration; // digest
        std::string label;
        std::uint64_t budget = 0;
        std::size_t runs = 0;
        double aoc_mean = 0.0;
        double aoc_std = 0.0;
        std::vector<std::size_t> members; // indices into the log set
    };

    /// Groups logs by (function, dimension, configuration digest, budget) and
    /// computes per-run AOC statistics. Rows are sorted by their key.
    std::vector<ReportRow> report(std::span<const metrics::RunLog> logs, const metrics::TargetGrid& grid);

    /// Columns: function,dimension,configuration,runs,aoc_mean,aoc_std
    void write_report_csv(std::span<const ReportRow> rows, std::ostream& out);

    /// Columns: configuration,label
    void write_labels_csv(std::span<const ReportRow> rows, std::ostream& out);

    /// Evaluation counts at which ECDF curves are sampled: about `count`
    /// log-spaced points in [1, budget], always including 1 and budget.
    std::vector<std::uint64_t> ecdf_sample_points(std::uint64_t budget, std::size_t count = 50);

    /// Columns: function,dimension,configuration,evaluations,ecdf
    void write_ecdf_csv(std::span<const ReportRow> rows, std::span<const metrics::RunLog> logs,
                        const metrics::TargetGrid& grid, std::ostream& out);
}
