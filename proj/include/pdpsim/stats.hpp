#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace pdpsim {

struct SummaryStats {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    long n = 0;
};

SummaryStats mean_se(std::span<const double> xs);

/// One-sample Kolmogorov-Smirnov statistic D_n against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS statistic between empirical distributions.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical value c(alpha) of the asymptotic Kolmogorov distribution,
/// solved from P(K > c) = alpha. One-sample threshold: c/sqrt(n);
/// two-sample: c * sqrt((n+m)/(n m)).
double kolmogorov_critical(double alpha);

inline double ks_one_sample_critical(double alpha, long n) {
    return kolmogorov_critical(alpha) / std::sqrt(static_cast<double>(n));
}

inline double ks_two_sample_critical(double alpha, long n, long m) {
    return kolmogorov_critical(alpha) *
           std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries covering [lo, hi]
    std::vector<long> counts;
    long below = 0;
    long above = 0;
};

Histogram make_histogram(std::span<const double> xs, double lo, double hi, int bins);

}  // namespace pdpsim
