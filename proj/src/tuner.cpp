#include "modde/tuner.hpp"

#include "modde/engine.hpp"
#include "modde/errors.hpp"
#include "modde/metrics.hpp"
#include "modde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace modde::tuner
{
    namespace
    {
        template <typename Enum, std::size_t N>
        Enum pick(const std::array<Enum, N>& options, Rng& rng)
        {
            return options[rng.index(N)];
        }

        constexpr std::array samplers{Sampler::gaussian, Sampler::sobol, Sampler::halton, Sampler::uniform};
        constexpr std::array bases{BaseVector::rand, BaseVector::best, BaseVector::target};
        constexpr std::array refs{RefVector::none, RefVector::pbest, RefVector::best, RefVector::rand};
        constexpr std::array crossovers{CrossoverMethod::bin, CrossoverMethod::exp};
        constexpr std::array sdises{Sdis::none,     Sdis::saturate, Sdis::unif_resample, Sdis::cotn,
                                    Sdis::toroidal, Sdis::mirror,   Sdis::hvb,           Sdis::expc_target,
                                    Sdis::expc_center, Sdis::exps};
        constexpr std::array adapt_fs{AdaptF::none, AdaptF::shade, AdaptF::shade_modified, AdaptF::jde};
        constexpr std::array adapt_crs{AdaptCR::none, AdaptCR::shade, AdaptCR::jde};

        Configuration draw_uniform(Rng& rng)
        {
            Configuration c;
            c.sampler = pick(samplers, rng);
            c.opposition = rng.bernoulli(0.5);
            c.base = pick(bases, rng);
            c.ref = pick(refs, rng);
            c.diffs = rng.bernoulli(0.5) ? 2 : 1;
            c.weighted_f = rng.bernoulli(0.5);
            c.archive = rng.bernoulli(0.5);
            c.crossover = pick(crossovers, rng);
            c.eigen_x = rng.bernoulli(0.5);
            c.sdis = pick(sdises, rng);
            c.adapt_f = pick(adapt_fs, rng);
            c.adapt_cr = pick(adapt_crs, rng);
            c.lpsr = rng.bernoulli(0.5);
            c.caps = rng.bernoulli(0.5);
            c.lambda = kMinLambda + static_cast<int>(rng.index(kMaxTunedLambda - kMinLambda + 1));
            c.f = rng.uniform(0.0, 2.0);
            c.cr = rng.uniform(0.0, 1.0);
            return c;
        }

        double truncated_normal(double center, double sd, double lo, double hi, Rng& rng)
        {
            for (int attempt = 0; attempt < 1000; ++attempt)
            {
                const double v = rng.normal(center, sd);
                if (v >= lo && v <= hi)
                    return v;
            }
            return std::clamp(center, lo, hi);
        }

        std::uint64_t instance_id(const TuningTask& task, std::size_t block)
        {
            return task.instances[block % task.instances.size()].instance_seed;
        }
    }

    Configuration sample_configuration(Rng& rng)
    {
        for (;;)
        {
            auto c = draw_uniform(rng);
            if (is_valid(c))
                return c;
        }
    }

    Configuration sample_around(const Configuration& elite, Rng& rng)
    {
        for (;;)
        {
            auto c = elite;
            const auto resample = [&] { return rng.bernoulli(kCategoricalResampleRate); };
            if (resample())
                c.sampler = pick(samplers, rng);
            if (resample())
                c.opposition = rng.bernoulli(0.5);
            if (resample())
                c.base = pick(bases, rng);
            if (resample())
                c.ref = pick(refs, rng);
            if (resample())
                c.diffs = rng.bernoulli(0.5) ? 2 : 1;
            if (resample())
                c.weighted_f = rng.bernoulli(0.5);
            if (resample())
                c.archive = rng.bernoulli(0.5);
            if (resample())
                c.crossover = pick(crossovers, rng);
            if (resample())
                c.eigen_x = rng.bernoulli(0.5);
            if (resample())
                c.sdis = pick(sdises, rng);
            if (resample())
                c.adapt_f = pick(adapt_fs, rng);
            if (resample())
                c.adapt_cr = pick(adapt_crs, rng);
            if (resample())
                c.lpsr = rng.bernoulli(0.5);
            if (resample())
                c.caps = rng.bernoulli(0.5);

            const double lambda_range = kMaxTunedLambda - kMinLambda;
            const double center = std::clamp<double>(elite.lambda, kMinLambda, kMaxTunedLambda);
            c.lambda = static_cast<int>(std::lround(
                truncated_normal(center, kNumericSigmaFraction * lambda_range, kMinLambda, kMaxTunedLambda, rng)));
            c.f = truncated_normal(elite.f, kNumericSigmaFraction * 2.0, 0.0, 2.0, rng);
            c.cr = truncated_normal(elite.cr, kNumericSigmaFraction * 1.0, 0.0, 1.0, rng);
            if (is_valid(c))
                return c;
        }
    }

    double evaluate_block(const TuningTask& task, const Configuration& config, std::size_t block)
    {
        const auto& instance = task.instances[block % task.instances.size()];
        const auto seed = mix_seed(task.seed, {0x7475ULL, static_cast<std::uint64_t>(block)});
        const auto result = run(config, instance, task.run_budget, seed);
        const metrics::RunLog logs[] = {result.log};
        return metrics::aoc(logs, metrics::TargetGrid::standard(), task.run_budget);
    }

    double EvaluationCache::get(const Configuration& config, std::size_t block)
    {
        const auto key = std::make_pair(digest(config), block);
        if (const auto it = cache_.find(key); it != cache_.end())
            return it->second;
        const double v = evaluator_(config, block);
        ++fresh_;
        cache_.emplace(key, v);
        return v;
    }

    bool EvaluationCache::contains(const Configuration& config, std::size_t block) const
    {
        return cache_.contains(std::make_pair(digest(config), block));
    }

    double RaceResult::mean_aoc(std::size_t candidate) const
    {
        double s = 0.0;
        std::size_t n = 0;
        for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(blocks); ++b)
        {
            const double v = aoc(b, static_cast<Eigen::Index>(candidate));
            if (!std::isnan(v))
            {
                s += v;
                ++n;
            }
        }
        return n ? s / static_cast<double>(n) : std::numeric_limits<double>::infinity();
    }

    RaceResult race(std::span<const Configuration> candidates, const TuningTask& task, std::uint64_t run_budget,
                    EvaluationCache& cache, std::vector<TuningLogRow>* log, std::size_t iteration)
    {
        const auto k = candidates.size();
        if (k < 2)
            throw InputError("a race needs at least two candidates");
        if (task.instances.empty())
            throw InputError("a race needs at least one instance");
        if (task.first_test < 1)
            throw InputError("first_test must be >= 1");
        if (run_budget < k * task.first_test)
            throw InputError("race budget " + std::to_string(run_budget) + " cannot pay for " +
                             std::to_string(task.first_test) + " blocks of " + std::to_string(k) + " candidates");

        RaceResult r;
        r.eliminated.assign(k, false);
        std::vector<std::vector<double>> rows; // per block, per candidate
        const auto start_runs = cache.fresh_runs();

        const auto alive = [&] {
            std::vector<std::size_t> a;
            for (std::size_t c = 0; c < k; ++c)
                if (!r.eliminated[c])
                    a.push_back(c);
            return a;
        };

        std::size_t block = 0;
        for (; block < kMaxBlocksPerRace; ++block)
        {
            const auto live = alive();
            if (live.size() <= 1)
                break;

            std::uint64_t cost = 0;
            for (const auto c : live)
                if (!cache.contains(candidates[c], block))
                    ++cost;
            if (cache.fresh_runs() - start_runs + cost > run_budget)
                break;

            std::vector<double> row(k, std::numeric_limits<double>::quiet_NaN());
            for (const auto c : live)
                row[c] = cache.get(candidates[c], block);
            rows.push_back(std::move(row));

            if (rows.size() < task.first_test)
                continue;

            Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(live.size()));
            for (std::size_t b = 0; b < rows.size(); ++b)
                for (std::size_t j = 0; j < live.size(); ++j)
                    m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = rows[b][live[j]];

            const auto f = stats::friedman(m);
            if (f.p_value < task.alpha)
            {
                const auto worse = stats::conover_worse_than_best(m, f, task.alpha);
                for (std::size_t j = 0; j < live.size(); ++j)
                    if (worse[j])
                        r.eliminated[live[j]] = true;
            }
        }

        r.blocks = rows.size();
        r.aoc = Matrix::Constant(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k),
                                 std::numeric_limits<double>::quiet_NaN());
        for (std::size_t b = 0; b < rows.size(); ++b)
            for (std::size_t c = 0; c < k; ++c)
                r.aoc(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) = rows[b][c];

        r.survivors = alive();
        std::stable_sort(r.survivors.begin(), r.survivors.end(),
                         [&](std::size_t a, std::size_t b) { return r.mean_aoc(a) < r.mean_aoc(b); });
        r.runs_used = cache.fresh_runs() - start_runs;

        if (log)
            for (std::size_t b = 0; b < rows.size(); ++b)
                for (std::size_t c = 0; c < k; ++c)
                    if (!std::isnan(rows[b][c]))
                        log->push_back({iteration, digest(candidates[c]), b, instance_id(task, b), rows[b][c],
                                        static_cast<bool>(r.eliminated[c])});
        return r;
    }

    std::size_t default_iterations()
    {
        return 2 + static_cast<std::size_t>(std::floor(std::log2(17.0)));
    }

    TuningResult tune(const TuningTask& task, std::size_t iterations, Rng& rng, Evaluator evaluator)
    {
        if (iterations == 0)
            iterations = default_iterations();
        if (!evaluator)
            evaluator = [&task](const Configuration& c, std::size_t block) { return evaluate_block(task, c, block); };
        EvaluationCache cache(std::move(evaluator));

        TuningResult out;
        std::vector<Elite> elites;

        for (std::size_t j = 1; j <= iterations; ++j)
        {
            const auto remaining = task.total_runs - cache.fresh_runs();
            const auto iteration_budget = remaining / (iterations - j + 1);
            const auto per_candidate = task.first_test + std::min<std::size_t>(5, j);
            auto n_candidates = static_cast<std::size_t>(iteration_budget / per_candidate);
            n_candidates = std::max(n_candidates, elites.size() + 1);
            if (n_candidates < 2 || iteration_budget < n_candidates * task.first_test)
                break;

            std::vector<Configuration> candidates;
            for (const auto& e : elites)
                candidates.push_back(e.config);
            while (candidates.size() < n_candidates)
            {
                Configuration c;
                if (elites.empty())
                    c = sample_configuration(rng);
                else
                {
                    // parent chosen with weights proportional to (elites - rank)
                    const auto ne = elites.size();
                    const double total = static_cast<double>(ne * (ne + 1)) / 2.0;
                    double u = rng.uniform() * total;
                    std::size_t parent = 0;
                    for (; parent + 1 < ne; ++parent)
                    {
                        u -= static_cast<double>(ne - parent);
                        if (u < 0.0)
                            break;
                    }
                    c = sample_around(elites[parent].config, rng);
                }
                const bool duplicate = std::any_of(candidates.begin(), candidates.end(),
                                                   [&](const Configuration& o) { return o == c; });
                if (!duplicate)
                    candidates.push_back(c);
            }

            const auto result = race(candidates, task, iteration_budget, cache, &out.log, j);
            elites.clear();
            for (const auto s : result.survivors)
            {
                if (elites.size() == kMaxElites)
                    break;
                elites.push_back({candidates[s], result.mean_aoc(s)});
            }
            out.iterations = j;
        }

        out.elites = std::move(elites);
        out.runs_used = cache.fresh_runs();
        return out;
    }

    void write_tuning_log(std::span<const TuningLogRow> rows, std::ostream& out)
    {
        out << "iteration,candidate,block,instance,aoc,eliminated\n";
        for (const auto& r : rows)
            out << r.iteration << ',' << r.digest << ',' << r.block << ',' << r.instance << ','
                << metrics::format_double(r.aoc) << ',' << (r.eliminated ? 1 : 0) << '\n';
    }
}
