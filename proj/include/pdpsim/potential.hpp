#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpsim/grid.hpp"

namespace pdpsim {

/// Real scalar potential V(x), evaluable on a Grid1D.
struct PotentialSpec {
    enum class Kind { Zero, Harmonic, Barrier, Tabulated };

    Kind kind = Kind::Zero;
    double center = 0.0;   // harmonic
    double omega = 1.0;    // harmonic: V = 0.5 * omega^2 * (x - center)^2
    double a = 0.0;        // barrier: V = height on [a, b]
    double b = 0.0;
    double height = 0.0;
    std::vector<double> table;  // tabulated: one value per grid point

    static PotentialSpec zero() { return {}; }

    static PotentialSpec harmonic(double center, double omega) {
        PotentialSpec v;
        v.kind = Kind::Harmonic;
        v.center = center;
        v.omega = omega;
        return v;
    }

    static PotentialSpec barrier(double a, double b, double height) {
        PotentialSpec v;
        v.kind = Kind::Barrier;
        v.a = a;
        v.b = b;
        v.height = height;
        return v;
    }

    static PotentialSpec tabulated(std::vector<double> values) {
        PotentialSpec v;
        v.kind = Kind::Tabulated;
        v.table = std::move(values);
        return v;
    }

    bool is_zero() const { return kind == Kind::Zero; }

    std::vector<double> evaluate(const Grid1D& grid) const {
        std::vector<double> v(static_cast<size_t>(grid.n), 0.0);
        switch (kind) {
            case Kind::Zero:
                break;
            case Kind::Harmonic:
                for (int i = 0; i < grid.n; ++i) {
                    const double d = grid.point(i) - center;
                    v[static_cast<size_t>(i)] = 0.5 * omega * omega * d * d;
                }
                break;
            case Kind::Barrier:
                for (int i = 0; i < grid.n; ++i) {
                    const double x = grid.point(i);
                    if (x >= a && x <= b) v[static_cast<size_t>(i)] = height;
                }
                break;
            case Kind::Tabulated:
                if (static_cast<int>(table.size()) != grid.n)
                    throw std::invalid_argument(
                        "PotentialSpec: tabulated length " + std::to_string(table.size()) +
                        " does not match grid n=" + std::to_string(grid.n));
                v = table;
                break;
        }
        return v;
    }
};

}  // namespace pdpsim
