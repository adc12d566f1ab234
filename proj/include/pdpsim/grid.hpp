#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pdpsim {

/// Uniform periodic grid on [x_min, x_max), x_max identified with x_min.
struct Grid1D {
    int n = 0;
    double x_min = 0.0;
    double x_max = 0.0;

    Grid1D() = default;
    Grid1D(int n_points, double lo, double hi) : n(n_points), x_min(lo), x_max(hi) {
        if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 points");
        if (!(hi > lo)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
    }

    double dx() const { return (x_max - x_min) / n; }
    double length() const { return x_max - x_min; }
    double point(int i) const { return x_min + i * dx(); }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = point(i);
        return xs;
    }

    /// Angular frequency of FFT mode j (negative branch for j >= n/2).
    double freq(int j) const {
        const int k = (j < n - n / 2) ? j : j - n;
        return 2.0 * M_PI * k / length();
    }

    bool power_of_two() const { return n > 0 && (n & (n - 1)) == 0; }

    bool operator==(const Grid1D& o) const {
        return n == o.n && x_min == o.x_min && x_max == o.x_max;
    }
};

/// Grid for fields on the (x, t) plane; t is a second periodic axis.
struct Grid2D {
    Grid1D x;
    Grid1D t;

    Grid2D() = default;
    Grid2D(Grid1D gx, Grid1D gt) : x(gx), t(gt) {}

    double cell() const { return x.dx() * t.dx(); }
    long size() const { return static_cast<long>(x.n) * t.n; }

    bool operator==(const Grid2D& o) const { return x == o.x && t == o.t; }
};

}  // namespace pdpsim
