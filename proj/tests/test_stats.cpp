#include <doctest.h>

#include <cmath>
#include <random>

#include "pdpsim/stats.hpp"

using namespace pdpsim;

TEST_SUITE("stats") {

TEST_CASE("mean and standard error") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    SummaryStats s = mean_se(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    // sample sd = sqrt(5/3), se = sd/2
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(s.n == 4);
    CHECK(mean_se(std::vector<double>{}).n == 0);
}

TEST_CASE("kolmogorov critical values match the classic table") {
    CHECK(kolmogorov_critical(0.05) == doctest::Approx(1.3581).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.01) == doctest::Approx(1.6276).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.10) == doctest::Approx(1.2238).epsilon(1e-3));
}

TEST_CASE("ks statistic accepts exponential samples drawn by inversion") {
    std::mt19937 gen(2024u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = -std::log(1.0 - u(gen));
    const double d = ks_statistic(xs, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(d < ks_one_sample_critical(0.01, static_cast<long>(xs.size())));
}

TEST_CASE("ks statistic rejects a wrong cdf") {
    std::mt19937 gen(7u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = -0.5 * std::log(1.0 - u(gen));  // rate 2
    const double d = ks_statistic(xs, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(d > ks_one_sample_critical(0.01, static_cast<long>(xs.size())));
}

TEST_CASE("two-sample ks on identical and shifted distributions") {
    std::mt19937 gen(99u);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> a(3000), b(3000), c(3000);
    for (auto& x : a) x = n01(gen);
    for (auto& x : b) x = n01(gen);
    for (auto& x : c) x = n01(gen) + 0.5;
    CHECK(ks_two_sample(a, b) <
          ks_two_sample_critical(0.05, static_cast<long>(a.size()), static_cast<long>(b.size())));
    CHECK(ks_two_sample(a, c) >
          ks_two_sample_critical(0.05, static_cast<long>(a.size()), static_cast<long>(c.size())));
}

TEST_CASE("histogram covers the range and counts everything") {
    std::vector<double> xs = {0.0, 0.1, 0.5, 0.999, 1.0, -0.2, 1.5};
    Histogram h = make_histogram(xs, 0.0, 1.0, 4);
    REQUIRE(h.edges.size() == 5);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    long total = h.below + h.above;
    for (long c : h.counts) total += c;
    CHECK(total == static_cast<long>(xs.size()));
    CHECK(h.below == 1);
    CHECK(h.above == 1);
    CHECK(h.counts[3] == 2);  // 0.999 and the closed right edge 1.0
}

}  // TEST_SUITE
