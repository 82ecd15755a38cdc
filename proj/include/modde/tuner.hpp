#pragma once

#include "modde/configuration.hpp"
#include "modde/problems.hpp"
#include "modde/rng.hpp"
#include "modde/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace modde::tuner
{
    /// Elite-neighbourhood sampling: each categorical field is redrawn with
    /// this probability; numeric fields move by a truncated normal with sd
    /// equal to this fraction of their range.
    inline constexpr double kCategoricalResampleRate = 0.2;
    inline constexpr double kNumericSigmaFraction = 0.2;
    inline constexpr std::size_t kMaxElites = 5;
    inline constexpr std::size_t kMaxBlocksPerRace = 1000;

    struct TuningTask
    {
        std::vector<problems::ProblemInstance> instances;
        std::uint64_t run_budget = 50000; // evaluations per DE run
        std::uint64_t total_runs = 10000; // DE runs for the whole tuning
        std::size_t first_test = 5;
        double alpha = 0.05;
        std::uint64_t seed = 0;
    };

    /// Uniform over the module grid; lambda in [4, 200], F in [0, 2], CR in [0, 1].
    /// Draws that fail validation (too few indices for the mutation) are redrawn.
    Configuration sample_configuration(Rng& rng);

    /// Neighbour of an elite: see kCategoricalResampleRate / kNumericSigmaFraction.
    Configuration sample_around(const Configuration& elite, Rng& rng);

    /// AOC of one candidate on one race block (instance/seed pair).
    using Evaluator = std::function<double(const Configuration&, std::size_t block)>;

    /// Runs `config` once on instance `block % instances` with a block-derived
    /// seed and returns its AOC over the standard target grid.
    double evaluate_block(const TuningTask& task, const Configuration& config, std::size_t block);

    /// Memoizes evaluator results per (configuration digest, block) and counts
    /// the fresh evaluations, which are what the tuning budget pays for.
    class EvaluationCache
    {
    public:
        explicit EvaluationCache(Evaluator evaluator) : evaluator_(std::move(evaluator)) {}

        double get(const Configuration& config, std::size_t block);
        [[nodiscard]] bool contains(const Configuration& config, std::size_t block) const;
        [[nodiscard]] std::uint64_t fresh_runs() const { return fresh_; }

    private:
        Evaluator evaluator_;
        std::map<std::pair<std::string, std::size_t>, double> cache_;
        std::uint64_t fresh_ = 0;
    };

    struct TuningLogRow
    {
        std::size_t iteration;
        std::string digest;
        std::size_t block;
        std::uint64_t instance;
        double aoc;
        bool eliminated;
    };

    struct RaceResult
    {
        std::vector<std::size_t> survivors; // indices into the candidate list, best mean AOC first
        std::vector<bool> eliminated;
        Matrix aoc;                         // blocks x candidates, NaN where not evaluated
        std::size_t blocks = 0;
        std::uint64_t runs_used = 0;

        /// Mean over the blocks the candidate was evaluated on.
        [[nodiscard]] double mean_aoc(std::size_t candidate) const;
    };

    /// Races the candidates block by block. After `first_test` blocks, and
    /// after each further block, a Friedman test at `alpha` runs on the alive
    /// candidates; on rejection, those Conover-significantly worse than the
    /// rank-best are eliminated. Stops when one candidate remains, the next
    /// block would overrun `run_budget`, or kMaxBlocksPerRace is reached.
    /// Throws InputError for fewer than two candidates or when the budget
    /// cannot pay for first_test blocks of all of them.
    RaceResult race(std::span<const Configuration> candidates, const TuningTask& task, std::uint64_t run_budget,
                    EvaluationCache& cache, std::vector<TuningLogRow>* log = nullptr, std::size_t iteration = 1);

    struct Elite
    {
        Configuration config;
        double mean_aoc;
    };

    struct TuningResult
    {
        std::vector<Elite> elites; // best first
        std::vector<TuningLogRow> log;
        std::uint64_t runs_used = 0;
        std::size_t iterations = 0;
    };

    /// Iterations used when none are requested: 2 + floor(log2(17 parameters)).
    std::size_t default_iterations();

    /// Iterated racing. The first race uses uniform samples; later ones add
    /// neighbours of the current elites. A custom evaluator replaces the DE runs.
    TuningResult tune(const TuningTask& task, std::size_t iterations, Rng& rng, Evaluator evaluator = {});

    void write_tuning_log(std::span<const TuningLogRow> rows, std::ostream& out);
}
