#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "mistrust/common.hpp"
#include "mistrust/csv.hpp"

namespace mistrust {

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow
inline double softplus(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

// ---------------------------------------------------------------------------
// descriptive statistics
// ---------------------------------------------------------------------------

inline double mean(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double median(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("median of empty sample");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double population_sd(std::span<const double> x) {
    const double m = mean(x);
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

// Zero-mean unit-variance scaling with the population convention.
inline std::vector<double> zscore(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("zscore of empty sample");
    const double m = mean(x);
    const double sd = population_sd(x);
    if (sd == 0.0) throw InvalidArgument("zscore of constant sample");
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) out.push_back((v - m) / sd);
    return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("pearson: samples differ in length");
    if (x.size() < 2) throw InvalidArgument("pearson: need at least 2 observations");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw InvalidArgument("pearson: correlation undefined for a constant sample");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// empirical CDF
// ---------------------------------------------------------------------------

struct EcdfCurve {
    std::vector<double> values;     // sorted distinct sample values
    std::vector<double> fractions;  // cumulative fraction <= value, ends at 1
    friend bool operator==(const EcdfCurve&, const EcdfCurve&) = default;
};

inline EcdfCurve ecdf(std::span<const double> sample) {
    if (sample.empty()) throw InvalidArgument("ecdf of empty sample");
    std::vector<double> v(sample.begin(), sample.end());
    std::sort(v.begin(), v.end());
    EcdfCurve curve;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 < v.size() && v[i + 1] == v[i]) continue;  // keep last of a tie run
        curve.values.push_back(v[i]);
        curve.fractions.push_back(static_cast<double>(i + 1) / n);
    }
    return curve;
}

inline void write_ecdf_csv(const EcdfCurve& curve, std::ostream& out) {
    write_csv_row(out, {"value", "fraction"});
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        char a[64], b[64];
        std::snprintf(a, sizeof a, "%.17g", curve.values[i]);
        std::snprintf(b, sizeof b, "%.17g", curve.fractions[i]);
        write_csv_row(out, {a, b});
    }
}

// ---------------------------------------------------------------------------
// Mann-Whitney U
// ---------------------------------------------------------------------------

struct MannWhitneyResult {
    double u_statistic = 0;  // U of the first sample
    double p_two_sided = 1;
    enum class Method { exact, normal_approx } method = Method::exact;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    friend bool operator==(const MannWhitneyResult&, const MannWhitneyResult&) = default;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace detail {

// Midranks of the combined sample, doubled so they are exact integers.
inline std::vector<std::int64_t> doubled_midranks(std::vector<double>& combined) {
    std::vector<std::size_t> order(combined.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return combined[a] < combined[b]; });
    std::vector<std::int64_t> rank2(combined.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && combined[order[j + 1]] == combined[order[i]]) ++j;
        // midrank of positions i..j (1-based) is (i+1 + j+1)/2; doubled: i+j+2
        const std::int64_t mid2 = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = mid2;
        i = j + 1;
    }
    return rank2;
}

// Counts size-n1 subsets of rank2 whose doubled U deviates from the mean by at
// least `dev_obs`. Exact integer arithmetic throughout.
inline void enumerate_subsets(const std::vector<std::int64_t>& rank2, std::size_t n1,
                              std::int64_t mean_u2, std::int64_t dev_obs, std::uint64_t& total,
                              std::uint64_t& at_least) {
    const std::size_t n = rank2.size();
    const std::int64_t base = static_cast<std::int64_t>(n1) * (static_cast<std::int64_t>(n1) + 1);
    std::vector<std::size_t> idx(n1);
    std::function<void(std::size_t, std::size_t, std::int64_t)> rec =
        [&](std::size_t pos, std::size_t chosen, std::int64_t ranksum2) {
            if (chosen == n1) {
                const std::int64_t u2 = ranksum2 - base;
                ++total;
                if (std::abs(u2 - mean_u2) >= dev_obs) ++at_least;
                return;
            }
            if (n - pos < n1 - chosen) return;
            rec(pos + 1, chosen + 1, ranksum2 + rank2[pos]);
            rec(pos + 1, chosen, ranksum2);
        };
    rec(0, 0, 0);
}

}  // namespace detail

// Two-sided Mann-Whitney U test with midranks for ties. Uses full enumeration
// of all C(n1+n2, n1) group assignments when n1+n2 <= exact_threshold, else a
// tie-corrected normal approximation with a 0.5 continuity correction.
inline MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b,
                                      std::size_t exact_threshold = 20) {
    if (a.empty() || b.empty()) throw InvalidArgument("mann_whitney: empty sample");
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    const std::size_t n = n1 + n2;

    std::vector<double> combined(a.begin(), a.end());
    combined.insert(combined.end(), b.begin(), b.end());
    const std::vector<std::int64_t> rank2 = detail::doubled_midranks(combined);

    std::int64_t ranksum2_a = 0;
    for (std::size_t i = 0; i < n1; ++i) ranksum2_a += rank2[i];
    const std::int64_t u2 =
        ranksum2_a - static_cast<std::int64_t>(n1) * (static_cast<std::int64_t>(n1) + 1);
    const std::int64_t mean_u2 = static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n2);

    MannWhitneyResult res;
    res.n1 = n1;
    res.n2 = n2;
    res.u_statistic = static_cast<double>(u2) / 2.0;

    if (n <= exact_threshold) {
        res.method = MannWhitneyResult::Method::exact;
        std::uint64_t total = 0, at_least = 0;
        detail::enumerate_subsets(rank2, n1, mean_u2, std::abs(u2 - mean_u2), total, at_least);
        res.p_two_sided = static_cast<double>(at_least) / static_cast<double>(total);
        return res;
    }

    res.method = MannWhitneyResult::Method::normal_approx;
    // tie-corrected variance: (n1 n2 / 12) * ((n+1) - sum(t^3 - t) / (n (n-1)))
    double tie_sum = 0;
    {
        std::vector<double> sorted = combined;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_sum += t * t * t - t;
            i = j + 1;
        }
    }
    const double dn = static_cast<double>(n);
    const double var = (static_cast<double>(n1) * static_cast<double>(n2) / 12.0) *
                       ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
    if (var <= 0.0) {
        res.p_two_sided = 1.0;  // all observations tied
        return res;
    }
    const double dev = std::max(0.0, std::abs(static_cast<double>(u2 - mean_u2)) / 2.0 - 0.5);
    const double z = dev / std::sqrt(var);
    res.p_two_sided = std::clamp(2.0 * (1.0 - normal_cdf(z)), 0.0, 1.0);
    return res;
}

}  // namespace mistrust
