#pragma once

#include <cmath>
#include <cstdint>

namespace trustgame {

// Philox4x32-10 counter-based generator. Streams are addressed by
// (seed, stream_id, block_counter), so per-path randomness is identical
// whether paths run serially or in parallel.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream_id)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

    std::uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        std::uint32_t x0 = static_cast<std::uint32_t>(block_);
        std::uint32_t x1 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t x2 = stream_lo_;
        std::uint32_t x3 = stream_hi_;
        std::uint32_t k0 = key0_;
        std::uint32_t k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMulA, x0, hi0, lo0);
            mulhilo(kMulB, x2, hi1, lo1);
            std::uint32_t y0 = hi1 ^ x1 ^ k0;
            std::uint32_t y1 = lo1;
            std::uint32_t y2 = hi0 ^ x3 ^ k1;
            std::uint32_t y3 = lo0;
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += kWeylA;
            k1 += kWeylB;
        }
        ++block_;
        spare_ = (static_cast<std::uint64_t>(x2) << 32) | x3;
        have_spare_ = true;
        return (static_cast<std::uint64_t>(x0) << 32) | x1;
    }

    // Uniform on the open interval (0,1); never returns an endpoint, so logs
    // are always finite.
    double uniform() {
        std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    bool bernoulli(double prob) { return uniform() < prob; }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                        std::uint32_t& lo) {
        std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(prod >> 32);
        lo = static_cast<std::uint32_t>(prod);
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace trustgame
