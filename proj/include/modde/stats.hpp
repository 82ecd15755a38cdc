#pragma once

#include "modde/types.hpp"

#include <span>
#include <vector>

namespace modde::stats
{
    /// Ranks 1..n with ties given their average rank.
    std::vector<double> average_ranks(std::span<const double> values);

    struct FriedmanResult
    {
        double statistic = 0.0;
        double p_value = 1.0;
        std::vector<double> rank_sums; // per candidate (column)
        double sum_squared_ranks = 0.0;
    };

    /// Friedman rank test over a blocks x candidates matrix (lower is better),
    /// with the tie-corrected statistic. p_value is 1 when every block is a full tie.
    FriedmanResult friedman(const Matrix& results);

    /// Conover's post-hoc comparison against the candidate with the lowest rank
    /// sum: true marks candidates whose rank-sum difference exceeds
    /// t_{1-alpha/2,(n-1)(k-1)} * sqrt(2 (n A - sum R_j^2) / ((n-1)(k-1))).
    std::vector<bool> conover_worse_than_best(const Matrix& results, const FriedmanResult& f, double alpha);

    struct RankSumResult
    {
        double u = 0.0;       // Mann-Whitney U of the first sample
        double z = 0.0;
        double p_less = 1.0;  // one-sided: first sample stochastically smaller
    };

    /// Wilcoxon rank-sum (Mann-Whitney) test, normal approximation with tie
    /// and continuity correction.
    RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

    double mean(std::span<const double> v);
    /// Sample standard deviation (n - 1); 0 for fewer than two values.
    double stddev(std::span<const double> v);
}
