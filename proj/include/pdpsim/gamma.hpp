#pragma once

#include <Eigen/Dense>
#include <array>

#include "pdpsim/types.hpp"

namespace pdpsim {

using Mat4 = Eigen::Matrix4cd;

/// Dirac gamma matrices in the standard representation:
///   gamma^0 = diag(I, -I),  gamma^i = [[0, sigma_i], [-sigma_i, 0]],
/// satisfying {gamma^mu, gamma^nu} = 2 eta^{mu nu} with eta = diag(+,-,-,-).
struct GammaSet {
    std::array<Mat4, 4> g;

    GammaSet();

    const Mat4& operator[](int mu) const { return g[static_cast<size_t>(mu)]; }

    /// Positive-signature projector P+ = (I + gamma^0)/2.
    Mat4 p_plus() const;

    /// Metric signature eta^{mu nu} (diagonal entries).
    static double eta(int mu, int nu) {
        if (mu != nu) return 0.0;
        return mu == 0 ? 1.0 : -1.0;
    }
};

/// Shared immutable instance.
const GammaSet& gammas();

}  // namespace pdpsim
