#pragma once

#include "rootb/normal.hpp"

#include <cstdint>

namespace rootb {

/// Philox4x32-10 counter-based generator.
///
/// Stream layout: the 128-bit counter is (path_id, block_index), the 64-bit
/// key is the user seed. Each block yields two doubles. Distinct path ids
/// give statistically independent streams regardless of which thread draws
/// them, so a simulation is reproducible bit for bit for a fixed seed no
/// matter how paths are partitioned across threads.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_id)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          path_(path_id) {}

    /// Uniform draw in the open interval (0,1).
    double next_uniform() {
        if (have_ == 0) {
            std::uint64_t lo, hi;
            block(path_, blk_++, lo, hi);
            spare_ = to_unit(hi);
            have_ = 1;
            return to_unit(lo);
        }
        have_ = 0;
        return spare_;
    }

    /// Standard normal via inverse CDF; one uniform consumed per draw.
    double next_normal() { return normal_inv_cdf(next_uniform()); }

private:
    static double to_unit(std::uint64_t x) {
        // 53 significant bits, shifted off zero
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void block(std::uint64_t ctr0, std::uint64_t ctr1, std::uint64_t& out_lo, std::uint64_t& out_hi) const {
        const std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        const std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        std::uint32_t x0 = static_cast<std::uint32_t>(ctr0);
        std::uint32_t x1 = static_cast<std::uint32_t>(ctr0 >> 32);
        std::uint32_t x2 = static_cast<std::uint32_t>(ctr1);
        std::uint32_t x3 = static_cast<std::uint32_t>(ctr1 >> 32);
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int r = 0; r < 10; ++r) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(M0, x0, hi0, lo0);
            mulhilo(M1, x2, hi1, lo1);
            std::uint32_t y0 = hi1 ^ x1 ^ k0;
            std::uint32_t y1 = lo1;
            std::uint32_t y2 = hi0 ^ x3 ^ k1;
            std::uint32_t y3 = lo0;
            x0 = y0; x1 = y1; x2 = y2; x3 = y3;
            k0 += W0; k1 += W1;
        }
        out_lo = (static_cast<std::uint64_t>(x1) << 32) | x0;
        out_hi = (static_cast<std::uint64_t>(x3) << 32) | x2;
    }

    std::uint32_t key0_, key1_;
    std::uint64_t path_;
    std::uint64_t blk_ = 0;
    int have_ = 0;
    double spare_ = 0.0;
};

} // namespace rootb
