#include "pdpsim/fft.hpp"

#include <cmath>
#include <unordered_map>

namespace pdpsim {

namespace {

// Twiddle tables per transform size; thread-local so the hot path never
// takes a lock.
const std::vector<cplx>& twiddles(int n) {
    thread_local std::unordered_map<int, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * M_PI * k / n;
        w[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

}  // namespace

void fft_inplace(std::span<cplx> a, bool inverse) {
    const int n = static_cast<int>(a.size());
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    // Bit-reversal permutation.
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddles(n);
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                cplx tw = w[static_cast<size_t>(k) * step];
                if (inverse) tw = std::conj(tw);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double s = 1.0 / n;
        for (auto& z : a) z *= s;
    }
}

void fft_strided(cplx* a, int n, long stride, bool inverse, std::vector<cplx>& scratch) {
    if (stride == 1) {
        fft_inplace(std::span<cplx>(a, static_cast<size_t>(n)), inverse);
        return;
    }
    scratch.resize(n);
    for (int i = 0; i < n; ++i) scratch[i] = a[i * stride];
    fft_inplace(scratch, inverse);
    for (int i = 0; i < n; ++i) a[i * stride] = scratch[i];
}

}  // namespace pdpsim
