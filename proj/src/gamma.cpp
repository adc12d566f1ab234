#include "pdpsim/gamma.hpp"

namespace pdpsim {

GammaSet::GammaSet() {
    const cplx i(0.0, 1.0);
    using M2 = Eigen::Matrix2cd;
    M2 id = M2::Identity();
    std::array<M2, 3> sigma;
    sigma[0] << 0, 1, 1, 0;
    sigma[1] << 0, -i, i, 0;
    sigma[2] << 1, 0, 0, -1;

    g[0].setZero();
    g[0].topLeftCorner<2, 2>() = id;
    g[0].bottomRightCorner<2, 2>() = -id;
    for (int k = 0; k < 3; ++k) {
        g[static_cast<size_t>(k + 1)].setZero();
        g[static_cast<size_t>(k + 1)].topRightCorner<2, 2>() = sigma[static_cast<size_t>(k)];
        g[static_cast<size_t>(k + 1)].bottomLeftCorner<2, 2>() = -sigma[static_cast<size_t>(k)];
    }
}

Mat4 GammaSet::p_plus() const {
    return (Mat4::Identity() + g[0]) * 0.5;
}

const GammaSet& gammas() {
    static const GammaSet instance;
    return instance;
}

}  // namespace pdpsim
