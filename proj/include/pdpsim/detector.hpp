#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpsim/grid.hpp"

namespace pdpsim {

/// Spatial coupling profile g(x) >= 0 of one position detector.
struct DetectorProfile {
    enum class Shape { Gaussian, Indicator, Tabulated };

    Shape shape = Shape::Gaussian;
    double center = 0.0;
    double width = 1.0;
    double strength = 1.0;     // overall scale; g >= 0 requires strength >= 0
    double a = 0.0, b = 0.0;   // indicator support
    std::vector<double> table;

    static DetectorProfile gaussian(double center, double width, double strength) {
        DetectorProfile p;
        p.shape = Shape::Gaussian;
        p.center = center;
        p.width = width;
        p.strength = strength;
        return p;
    }

    static DetectorProfile indicator(double a, double b, double strength) {
        DetectorProfile p;
        p.shape = Shape::Indicator;
        p.a = a;
        p.b = b;
        p.strength = strength;
        return p;
    }

    static DetectorProfile tabulated(std::vector<double> values) {
        DetectorProfile p;
        p.shape = Shape::Tabulated;
        p.table = std::move(values);
        return p;
    }

    /// Spatially constant coupling with rate strength^2.
    static DetectorProfile constant(const Grid1D& grid, double strength) {
        return tabulated(std::vector<double>(static_cast<size_t>(grid.n), strength));
    }

    std::vector<double> evaluate(const Grid1D& grid) const {
        if (strength < 0.0)
            throw std::invalid_argument("DetectorProfile: strength must be non-negative");
        std::vector<double> g(static_cast<size_t>(grid.n), 0.0);
        switch (shape) {
            case Shape::Gaussian: {
                if (!(width > 0.0))
                    throw std::invalid_argument("DetectorProfile: width must be positive");
                for (int i = 0; i < grid.n; ++i) {
                    const double d = grid.point(i) - center;
                    g[static_cast<size_t>(i)] =
                        strength * std::exp(-d * d / (2.0 * width * width));
                }
                break;
            }
            case Shape::Indicator:
                for (int i = 0; i < grid.n; ++i) {
                    const double x = grid.point(i);
                    if (x >= a && x <= b) g[static_cast<size_t>(i)] = strength;
                }
                break;
            case Shape::Tabulated:
                if (static_cast<int>(table.size()) != grid.n)
                    throw std::invalid_argument("DetectorProfile: tabulated length mismatch");
                for (int i = 0; i < grid.n; ++i) {
                    if (table[static_cast<size_t>(i)] < 0.0)
                        throw std::invalid_argument(
                            "DetectorProfile: tabulated g(x) must be non-negative at point " +
                            std::to_string(i));
                    g[static_cast<size_t>(i)] = table[static_cast<size_t>(i)];
                }
                break;
        }
        return g;
    }
};

/// One classical detector: coupling profile plus classical state alpha.
struct DetectorSpec {
    DetectorProfile profile;
    bool active = true;
    bool single_shot = true;   // decouple permanently after the first click
    double dead_time = 0.0;    // reusable mode: re-arm delay after a click
    int alpha = 0;             // 0 = never clicked, 1 = clicked at least once
};

}  // namespace pdpsim
