#include "judgebench/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace judgebench {

namespace {

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double sample_variance(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

SeedAggregate aggregate_seeds(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument{"seed aggregation needs at least two values"};
    }
    SeedAggregate agg;
    agg.values.assign(values.begin(), values.end());
    agg.mean = mean_of(values);
    const bool constant = std::all_of(values.begin(), values.end(), [&](double x) { return x == values.front(); });
    agg.stddev = constant ? 0.0 : std::sqrt(sample_variance(values, agg.mean));
    return agg;
}

SignificanceResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument{"Welch's t-test needs at least two values per sample"};
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = sample_variance(a, ma) / static_cast<double>(a.size());
    const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
    const double se2 = va + vb;

    SignificanceResult result;
    if (se2 == 0.0) {
        if (ma == mb) {
            result.t = 0.0;
            result.p = 1.0;
        } else {
            result.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            result.p = std::numeric_limits<double>::min();
        }
        result.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
        result.significant = result.p < significance_level;
        return result;
    }

    result.t = (ma - mb) / std::sqrt(se2);
    result.degrees_of_freedom =
        se2 * se2 / (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist{result.degrees_of_freedom};
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(result.t)));
    result.p = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
    result.significant = result.p < significance_level;
    return result;
}

}  // namespace judgebench
