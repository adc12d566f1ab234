#pragma once

#include <array>
#include <cstdint>

namespace pdpsim {

/// Philox4x32-10 keyed counter block function. Pure: output depends only
/// on (counter, key), which is what makes per-trajectory streams
/// independent of execution order.
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key);

/// One reproducible uniform stream. Streams are indexed: trajectory i uses
/// stream_index i, and identical (seed, stream_index) replays the identical
/// sequence bit for bit.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream_index)
        : seed_(seed), stream_(stream_index) {}

    uint64_t seed() const { return seed_; }
    uint64_t stream_index() const { return stream_; }

    uint64_t next_u64() {
        if (pos_ >= 4) refill();
        const uint64_t lo = buf_[pos_];
        const uint64_t hi = buf_[pos_ + 1];
        pos_ += 2;
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

private:
    void refill() {
        const std::array<uint32_t, 4> ctr = {
            static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
            static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
        const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                             static_cast<uint32_t>(seed_ >> 32)};
        buf_ = philox4x32(ctr, key);
        ++block_;
        pos_ = 0;
    }

    uint64_t seed_;
    uint64_t stream_;
    uint64_t block_ = 0;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace pdpsim
