#include "pdpsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdpsim {

SummaryStats mean_se(std::span<const double> xs) {
    SummaryStats s;
    s.n = static_cast<long>(xs.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / (s.n - 1.0) / s.n);
    }
    return s;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1.0) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

namespace {

// Complementary CDF of the Kolmogorov distribution.
double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
        q += term;
        if (std::abs(term) < 1e-14) break;
    }
    return std::min(1.0, std::max(0.0, q));
}

}  // namespace

double kolmogorov_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("kolmogorov_critical: alpha in (0,1) required");
    double lo = 0.2, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_q(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Histogram make_histogram(std::span<const double> xs, double lo, double hi, int bins) {
    if (!(hi > lo) || bins < 1) throw std::invalid_argument("make_histogram: bad range or bins");
    Histogram h;
    h.edges.resize(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<size_t>(i)] = lo + (hi - lo) * i / bins;
    h.counts.assign(static_cast<size_t>(bins), 0);
    for (double x : xs) {
        if (x < lo) {
            ++h.below;
        } else if (x > hi) {
            ++h.above;
        } else {
            int b = static_cast<int>((x - lo) / (hi - lo) * bins);
            if (b == bins) b = bins - 1;  // x == hi lands in the last bin
            ++h.counts[static_cast<size_t>(b)];
        }
    }
    return h;
}

}  // namespace pdpsim
