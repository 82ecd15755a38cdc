#include "modde/stats.hpp"

#include "modde/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modde::stats
{
    std::vector<double> average_ranks(std::span<const double> values)
    {
        const auto n = values.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n)
        {
            std::size_t j = i;
            while (j + 1 < n && values[order[j + 1]] == values[order[i]])
                ++j;
            const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                ranks[order[k]] = r;
            i = j + 1;
        }
        return ranks;
    }

    FriedmanResult friedman(const Matrix& results)
    {
        const auto n = results.rows();
        const auto k = results.cols();
        if (n < 1 || k < 2)
            throw InputError("friedman test needs >= 1 block and >= 2 candidates");

        FriedmanResult out;
        out.rank_sums.assign(static_cast<std::size_t>(k), 0.0);
        double tie_term = 0.0;
        for (Eigen::Index b = 0; b < n; ++b)
        {
            std::vector<double> row(static_cast<std::size_t>(k));
            for (Eigen::Index c = 0; c < k; ++c)
                row[static_cast<std::size_t>(c)] = results(b, c);
            const auto r = average_ranks(row);
            for (std::size_t c = 0; c < r.size(); ++c)
            {
                out.rank_sums[c] += r[c];
                out.sum_squared_ranks += r[c] * r[c];
            }
            // sum over tie groups of (t^3 - t)
            std::vector<double> sorted = row;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < sorted.size();)
            {
                std::size_t j = i;
                while (j < sorted.size() && sorted[j] == sorted[i])
                    ++j;
                const double t = static_cast<double>(j - i);
                tie_term += t * t * t - t;
                i = j;
            }
        }

        const double nd = static_cast<double>(n);
        const double kd = static_cast<double>(k);
        double ss = 0.0;
        for (const double r : out.rank_sums)
            ss += (r - nd * (kd + 1.0) / 2.0) * (r - nd * (kd + 1.0) / 2.0);
        const double denominator = nd * kd * (kd + 1.0) - tie_term / (kd - 1.0);
        if (denominator <= 0.0)
        {
            out.statistic = 0.0;
            out.p_value = 1.0;
            return out;
        }
        out.statistic = 12.0 * ss / denominator;
        const boost::math::chi_squared_distribution<double> chi2(kd - 1.0);
        out.p_value = boost::math::cdf(boost::math::complement(chi2, out.statistic));
        return out;
    }

    std::vector<bool> conover_worse_than_best(const Matrix& results, const FriedmanResult& f, double alpha)
    {
        const double n = static_cast<double>(results.rows());
        const double k = static_cast<double>(results.cols());
        std::vector<bool> worse(f.rank_sums.size(), false);
        if (results.rows() < 2)
            return worse;

        double sum_r2 = 0.0;
        for (const double r : f.rank_sums)
            sum_r2 += r * r;
        const double spread = n * f.sum_squared_ranks - sum_r2;
        const double best = *std::min_element(f.rank_sums.begin(), f.rank_sums.end());
        // every block ranks the candidates identically: no residual variance
        if (spread <= 1e-9 * n * f.sum_squared_ranks)
        {
            for (std::size_t c = 0; c < worse.size(); ++c)
                worse[c] = f.rank_sums[c] > best;
            return worse;
        }

        const double dof = (n - 1.0) * (k - 1.0);
        const boost::math::students_t_distribution<double> t(dof);
        const double critical = boost::math::quantile(t, 1.0 - alpha / 2.0) * std::sqrt(2.0 * spread / dof);
        for (std::size_t c = 0; c < worse.size(); ++c)
            worse[c] = f.rank_sums[c] - best > critical;
        return worse;
    }

    RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b)
    {
        const auto na = a.size();
        const auto nb = b.size();
        if (na == 0 || nb == 0)
            throw InputError("rank-sum test needs two non-empty samples");

        std::vector<double> pooled(a.begin(), a.end());
        pooled.insert(pooled.end(), b.begin(), b.end());
        const auto ranks = average_ranks(pooled);

        double ra = 0.0;
        for (std::size_t i = 0; i < na; ++i)
            ra += ranks[i];

        const double n1 = static_cast<double>(na);
        const double n2 = static_cast<double>(nb);
        const double n = n1 + n2;

        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        double tie_term = 0.0;
        for (std::size_t i = 0; i < sorted.size();)
        {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i])
                ++j;
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }

        RankSumResult out;
        out.u = ra - n1 * (n1 + 1.0) / 2.0;
        const double mu = n1 * n2 / 2.0;
        const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
        if (var <= 0.0)
            return out;
        // continuity correction toward the null for the lower tail
        out.z = (out.u - mu + 0.5) / std::sqrt(var);
        const boost::math::normal_distribution<double> normal;
        out.p_less = boost::math::cdf(normal, out.z);
        return out;
    }

    double mean(std::span<const double> v)
    {
        if (v.empty())
            return 0.0;
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    }

    double stddev(std::span<const double> v)
    {
        if (v.size() < 2)
            return 0.0;
        const double m = mean(v);
        double s = 0.0;
        for (const double x : v)
            s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    }
}
