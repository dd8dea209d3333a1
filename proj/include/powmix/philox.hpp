#pragma once

#include <cstdint>
#include <cmath>

namespace powmix {

// Philox4x32-10 counter-based generator. A (key, counter) pair maps to four
// 32-bit words; distinct keys give independent streams, so samplers can key by
// (role, sample index) and draw as many values as a rejection loop needs
// without disturbing any other sample's stream.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    struct Block {
        std::uint32_t v[4];
    };

    static inline void round_once(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        std::uint32_t out[4];
        out[0] = hi1 ^ ctr[1] ^ key[0];
        out[1] = lo1;
        out[2] = hi0 ^ ctr[3] ^ key[1];
        out[3] = lo0;
        ctr[0] = out[0]; ctr[1] = out[1]; ctr[2] = out[2]; ctr[3] = out[3];
    }

    static inline Block generate(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                                 std::uint32_t k0, std::uint32_t k1) {
        std::uint32_t ctr[4] = {c0, c1, c2, c3};
        std::uint32_t key[2] = {k0, k1};
        for (int r = 0; r < 10; ++r) {
            round_once(ctr, key);
            key[0] += W0;
            key[1] += W1;
        }
        return Block{{ctr[0], ctr[1], ctr[2], ctr[3]}};
    }
};

// One logical random stream: fixed (seed, role, index) identity, sequential
// 32-bit draws. Each draw consumes one word of a Philox block.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint32_t role, std::uint64_t index)
        : k0_(static_cast<std::uint32_t>(seed) ^ role),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          c0_(static_cast<std::uint32_t>(index)),
          c1_(static_cast<std::uint32_t>(index >> 32)) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            ++block_;
            pos_ = 0;
        }
        if (pos_ == 0)
            buf_ = Philox4x32::generate(c0_, c1_, block_, 0u, k0_, k1_);
        return buf_.v[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on (0,1), strictly inside the interval.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard exponential via inversion.
    double next_exp() { return -std::log(next_double()); }

private:
    std::uint32_t k0_, k1_, c0_, c1_;
    std::uint32_t block_ = 0;
    int pos_ = 0;
    Philox4x32::Block buf_{};
};

} // namespace powmix
