#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace modde::metrics
{
    struct LogRecord
    {
        std::uint64_t evaluations;
        double best_precision;

        bool operator==(const LogRecord&) const = default;
    };

    struct RunMetadata
    {
        std::string function;
        std::uint64_t instance = 0;
        int dimension = 0;
        std::string configuration; // digest
        std::string label;         // human-readable configuration name, optional
        std::uint64_t run_seed = 0;
        std::uint64_t budget = 0;

        bool operator==(const RunMetadata&) const = default;
    };

    /// Improvement-only trace: evaluation counts strictly increasing,
    /// precision strictly decreasing.
    struct RunLog
    {
        std::vector<LogRecord> records;
        RunMetadata metadata;

        /// Appends (evaluations, precision) if it improves on the last record.
        bool record(std::uint64_t evaluations, double precision);

        /// Best precision reached within the first `evaluations` evaluations (+inf before the first).
        [[nodiscard]] double precision_at(std::uint64_t evaluations) const;

        bool operator==(const RunLog&) const = default;
    };

    /// Precision targets, largest first.
    struct TargetGrid
    {
        std::vector<double> targets;

        /// 81 targets 10^(8 - 0.2k), k = 0..80.
        static TargetGrid standard();

        /// `count` log-spaced targets from `upper` down to `lower`.
        static TargetGrid log_spaced(double upper, double lower, std::size_t count);

        [[nodiscard]] std::size_t size() const { return targets.size(); }
    };

    /// ECDF(b) for b = 1..budget over (run, target) pairs.
    class Ecdf
    {
    public:
        Ecdf(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget);

        /// Fraction of (run, target) pairs hit within b evaluations; 0 for b = 0.
        [[nodiscard]] double operator()(std::uint64_t b) const;

        /// Normalized area over the curve: (1/B) sum_{b=1..B} (1 - ECDF(b)).
        [[nodiscard]] double aoc() const;

        [[nodiscard]] std::uint64_t budget() const { return budget_; }
        [[nodiscard]] std::size_t pairs() const { return hit_times_.size(); }

    private:
        std::vector<std::uint64_t> hit_times_; // sorted first-hit evaluation, budget + 1 if never
        std::uint64_t budget_;
    };

    /// Throws InputError for an empty log set or logs with mismatched dimension/budget.
    Ecdf ecdf(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget);
    double aoc(std::span<const RunLog> logs, const TargetGrid& grid, std::uint64_t budget);

    /// CSV header `evaluations,best_precision`, values with 17 significant digits.
    void write_log_csv(const RunLog& log, std::ostream& out);
    RunLog read_log_csv(std::istream& in, const std::string& source = "<log>");

    void write_metadata(const RunMetadata& meta, std::ostream& out);
    RunMetadata read_metadata(std::istream& in, const std::string& source = "<meta>");

    /// Sidecar path: `run.csv` -> `run.meta`.
    std::filesystem::path metadata_path(const std::filesystem::path& csv);

    void write_log(const RunLog& log, const std::filesystem::path& csv);
    RunLog read_log(const std::filesystem::path& csv);

    std::string format_double(double v);
}
