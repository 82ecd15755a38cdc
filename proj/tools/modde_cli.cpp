#include "modde/configuration.hpp"
#include "modde/errors.hpp"
#include "modde/experiment.hpp"
#include "modde/metrics.hpp"
#include "modde/presets.hpp"
#include "modde/problems.hpp"
#include "modde/tuner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace modde;

namespace
{
    // Bad values the parser cannot catch by itself; exit code 1.
    struct UsageError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct ConfigSource
    {
        std::string label;
        std::function<Configuration(int)> make;
    };

    /// A readable file is loaded as a configuration file, anything else must be a preset name.
    ConfigSource resolve_config(const std::string& source)
    {
        if (fs::is_regular_file(source))
        {
            const auto config = load_configuration(source);
            return {fs::path(source).stem().string(), [config](int) { return config; }};
        }
        if (!presets::is_preset(source, 2))
            throw UsageError("'" + source + "' is neither a configuration file nor a preset name");
        return {source, [source](int dim) { return presets::lookup(source, dim); }};
    }

    problems::FunctionId function_arg(const std::string& name)
    {
        try
        {
            return problems::parse_function(name);
        }
        catch (const std::exception&)
        {
            throw UsageError("unknown function '" + name + "'");
        }
    }

    void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body)
    {
        std::ofstream out(path);
        if (!out)
            throw InputError("cannot write '" + path.string() + "'");
        body(out);
        if (!out)
            throw InputError("failed writing '" + path.string() + "'");
    }

    void write_reports(std::span<const metrics::RunLog> logs, const metrics::TargetGrid& grid, const fs::path& out)
    {
        fs::create_directories(out);
        const auto rows = experiment::report(logs, grid);
        write_file(out / "report.csv", [&](std::ostream& o) { experiment::write_report_csv(rows, o); });
        write_file(out / "configurations.csv", [&](std::ostream& o) { experiment::write_labels_csv(rows, o); });
        write_file(out / "ecdf.csv", [&](std::ostream& o) { experiment::write_ecdf_csv(rows, logs, grid, o); });
        std::cout << rows.size() << " report rows written to " << (out / "report.csv").string() << '\n';
    }

    std::vector<metrics::RunLog> read_all(std::span<const fs::path> paths)
    {
        std::vector<metrics::RunLog> logs;
        for (const auto& p : paths)
            logs.push_back(metrics::read_log(p));
        return logs;
    }

    struct RunArgs
    {
        std::string preset;
        std::string config;
        std::string function;
        int dim = 0;
        std::uint64_t instances = 10;
        std::uint64_t reps = 5;
        std::uint64_t budget = 50000;
        std::uint64_t seed = 0;
        std::string out = "runs";
        unsigned jobs = 1;
    };

    int cmd_run(const RunArgs& a)
    {
        const auto source = resolve_config(a.preset.empty() ? a.config : a.preset);
        experiment::Grid grid;
        grid.functions = {function_arg(a.function)};
        grid.dimensions = {a.dim};
        grid.instances = a.instances;
        grid.repetitions = a.reps;
        grid.budget = a.budget;
        grid.seed = a.seed;
        const std::vector<std::string> labels{source.label};
        const auto specs =
            experiment::plan(labels, [&](const std::string&, int d) { return source.make(d); }, grid);
        const auto paths = experiment::run_batch(specs, a.out, a.jobs);
        std::cout << paths.size() << " logs written to " << a.out << '\n';
        return 0;
    }

    struct BenchmarkArgs
    {
        std::string portfolio = "common";
        std::vector<int> dims{5, 10, 20};
        std::vector<std::string> functions;
        std::uint64_t instances = 10;
        std::uint64_t reps = 5;
        std::uint64_t budget = 50000;
        std::uint64_t seed = 0;
        std::string out = "benchmark";
        unsigned jobs = 1;
    };

    int cmd_benchmark(const BenchmarkArgs& a)
    {
        std::vector<std::string> labels;
        if (a.portfolio == "common" || a.portfolio == "both")
            for (const auto name : presets::kCommonVariants)
                labels.emplace_back(name);
        if (a.portfolio == "single_module" || a.portfolio == "both")
            for (const auto& v : presets::single_module_variants(5))
                labels.push_back(v.name);

        experiment::Grid grid;
        if (a.functions.empty())
            grid.functions.assign(problems::kSuite.begin(), problems::kSuite.end());
        else
            for (const auto& f : a.functions)
                grid.functions.push_back(function_arg(f));
        grid.dimensions = a.dims;
        grid.instances = a.instances;
        grid.repetitions = a.reps;
        grid.budget = a.budget;
        grid.seed = a.seed;

        const auto specs = experiment::plan(
            labels, [](const std::string& name, int d) { return presets::lookup(name, d); }, grid);
        const fs::path out(a.out);
        const auto paths = experiment::run_batch(specs, out / "logs", a.jobs);
        std::cout << labels.size() << " configurations, " << paths.size() << " runs\n";
        write_reports(read_all(paths), metrics::TargetGrid::standard(), out);
        return 0;
    }

    struct TuneArgs
    {
        std::string function;
        int dim = 0;
        std::uint64_t budget = 10000;
        std::uint64_t run_budget = 50000;
        std::uint64_t reps = 1;
        std::size_t iterations = 0;
        std::size_t first_test = 5;
        double alpha = 0.05;
        std::uint64_t seed = 0;
        std::string out = "tuning";
    };

    int cmd_tune(const TuneArgs& a)
    {
        tuner::TuningTask task;
        if (a.function == "all")
        {
            // generalist: one instance per suite function
            for (const auto fid : problems::kSuite)
                task.instances.push_back(problems::make_instance(fid, a.dim, 1));
        }
        else
        {
            // specialist: the first five instances of one function
            const auto fid = function_arg(a.function);
            for (std::uint64_t i = 1; i <= 5; ++i)
                task.instances.push_back(problems::make_instance(fid, a.dim, i));
        }
        task.run_budget = a.run_budget;
        task.total_runs = a.budget;
        task.first_test = a.first_test;
        task.alpha = a.alpha;

        const fs::path out(a.out);
        fs::create_directories(out);
        std::ofstream summary(out / "elites.csv");
        if (!summary)
            throw InputError("cannot write '" + (out / "elites.csv").string() + "'");
        summary << "repetition,rank,configuration,mean_aoc,file\n";

        for (std::uint64_t r = 1; r <= a.reps; ++r)
        {
            task.seed = mix_seed(a.seed, {r});
            Rng rng(mix_seed(a.seed, {r, 1}));
            const auto result = tuner::tune(task, a.iterations, rng);

            const auto dir = out / ("rep" + std::to_string(r));
            fs::create_directories(dir);
            write_file(dir / "tuning_log.csv", [&](std::ostream& o) { tuner::write_tuning_log(result.log, o); });
            for (std::size_t k = 0; k < result.elites.size(); ++k)
            {
                const auto file = dir / ("elite_" + std::to_string(k + 1) + ".cfg");
                save_configuration(result.elites[k].config, file);
                summary << r << ',' << k + 1 << ',' << digest(result.elites[k].config) << ','
                        << metrics::format_double(result.elites[k].mean_aoc) << ','
                        << fs::relative(file, out).generic_string() << '\n';
            }
            std::cout << "repetition " << r << ": " << result.iterations << " iterations, " << result.runs_used
                      << " runs, " << result.elites.size() << " elites\n";
        }
        return 0;
    }

    struct ReportArgs
    {
        std::string logs;
        std::string out = "report";
        double grid_upper = 1e8;
        double grid_lower = 1e-8;
        std::size_t grid_count = 81;
    };

    int cmd_report(const ReportArgs& a)
    {
        const auto loaded = experiment::load_logs(a.logs);
        for (const auto& w : loaded.warnings)
            std::cerr << "warning: " << w << '\n';
        if (loaded.logs.empty())
            throw InputError("no readable logs under '" + a.logs + "'");
        write_reports(loaded.logs, metrics::TargetGrid::log_spaced(a.grid_upper, a.grid_lower, a.grid_count), a.out);
        return 0;
    }

    int cmd_presets(int dim, const std::string& show)
    {
        if (!show.empty())
        {
            std::cout << to_text(presets::lookup(show, dim));
            return 0;
        }
        std::cout << "name,configuration\n";
        std::cout << "default," << digest(default_configuration(dim)) << '\n';
        for (const auto& v : presets::common_variants(dim))
            std::cout << v.name << ',' << digest(v.config) << '\n';
        for (const auto& v : presets::single_module_variants(dim))
            std::cout << v.name << ',' << digest(v.config) << '\n';
        return 0;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Modular differential evolution: runs, benchmarks, tuning and AOC reports"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run one configuration on one function over instances x repetitions");
    auto* preset_opt = run->add_option("--preset", run_args.preset, "Preset name (default, L-SHADE, sdis=mirror, ...)");
    auto* config_opt = run->add_option("--config", run_args.config, "Configuration file or preset name");
    preset_opt->excludes(config_opt);
    run->add_option("--function", run_args.function, "Suite function, by name or id 1-6")->required();
    run->add_option("--dim", run_args.dim, "Search space dimension")->required()->check(CLI::Range(2, 1000));
    run->add_option("--instances", run_args.instances, "Instances 1..N")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--reps", run_args.reps, "Repetitions per instance")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--budget", run_args.budget, "Evaluations per run")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--seed", run_args.seed, "Master seed")->capture_default_str();
    run->add_option("--out", run_args.out, "Output directory for logs")->capture_default_str();
    run->add_option("--jobs", run_args.jobs, "Concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);

    BenchmarkArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "Run a preset portfolio on the suite and write the AOC report");
    bench->add_option("--portfolio", bench_args.portfolio, "common, single_module or both")
        ->capture_default_str()
        ->check(CLI::IsMember({"common", "single_module", "both"}));
    bench->add_option("--dims", bench_args.dims, "Dimensions")->capture_default_str()->check(CLI::Range(2, 1000));
    bench->add_option("--functions", bench_args.functions, "Functions (default: the whole suite)");
    bench->add_option("--instances", bench_args.instances, "Instances 1..N")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--reps", bench_args.reps, "Repetitions per instance")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--budget", bench_args.budget, "Evaluations per run")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_args.seed, "Master seed")->capture_default_str();
    bench->add_option("--out", bench_args.out, "Output directory (logs/, report.csv, configurations.csv, ecdf.csv)")
        ->capture_default_str();
    bench->add_option("--jobs", bench_args.jobs, "Concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "Iterated racing over the module space");
    tune->add_option("--function", tune_args.function, "Function name/id (specialist, 5 instances) or 'all' (generalist)")
        ->required();
    tune->add_option("--dim", tune_args.dim, "Search space dimension")->required()->check(CLI::Range(2, 1000));
    tune->add_option("--budget", tune_args.budget, "Tuning budget in DE runs")->capture_default_str()->check(CLI::PositiveNumber);
    tune->add_option("--run-budget", tune_args.run_budget, "Evaluations per DE run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    tune->add_option("--reps", tune_args.reps, "Independent tuner runs")->capture_default_str()->check(CLI::PositiveNumber);
    tune->add_option("--iterations", tune_args.iterations, "Racing iterations (0: 2 + floor(log2 17))")->capture_default_str();
    tune->add_option("--first-test", tune_args.first_test, "Blocks before the first test")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    tune->add_option("--alpha", tune_args.alpha, "Significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    tune->add_option("--seed", tune_args.seed, "Master seed")->capture_default_str();
    tune->add_option("--out", tune_args.out, "Output directory (elites.csv, rep<k>/)")->capture_default_str();

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Aggregate a directory of logs into AOC and ECDF tables");
    report->add_option("--logs", report_args.logs, "Directory scanned recursively for *.csv logs")->required();
    report->add_option("--out", report_args.out, "Output directory (report.csv, configurations.csv, ecdf.csv)")
        ->capture_default_str();
    report->add_option("--grid-upper", report_args.grid_upper, "Largest precision target")->capture_default_str();
    report->add_option("--grid-lower", report_args.grid_lower, "Smallest precision target")->capture_default_str();
    report->add_option("--grid-count", report_args.grid_count, "Number of log-spaced targets")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    int presets_dim = 5;
    std::string presets_show;
    auto* list = app.add_subcommand("presets", "List preset names with their digests, or print one");
    list->add_option("--dim", presets_dim, "Dimension the presets are built for")->capture_default_str()->check(CLI::Range(2, 1000));
    list->add_option("--show", presets_show, "Print this preset as a configuration file");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (*run)
        {
            if (run_args.preset.empty() && run_args.config.empty())
                throw UsageError("run needs --preset or --config");
            return cmd_run(run_args);
        }
        if (*bench)
            return cmd_benchmark(bench_args);
        if (*tune)
            return cmd_tune(tune_args);
        if (*report)
            return cmd_report(report_args);
        if (*list)
            return cmd_presets(presets_dim, presets_show);
    }
    catch (const UsageError& e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
