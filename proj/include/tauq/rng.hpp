#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tauq {

/// Counter-based random stream (Philox4x32-10). A stream is addressed by
/// (seed, stream_id); draws depend only on that address and the number of
/// values consumed, never on which thread runs the path. This is what makes
/// Monte Carlo results bit-identical for any worker count.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream_id),
               static_cast<std::uint32_t>(stream_id >> 32)} {}

    /// Uniform draw in the open interval (0, 1).
    double uniform() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t bits = (hi << 21) ^ lo;  // 53 significant bits
        return (static_cast<double>(bits & ((1ull << 53) - 1)) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached so consumption stays
    /// deterministic per stream.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Poisson count by Knuth's product method. Intended for the small
    /// per-step rates of jump simulation; refuses rates where the loop would
    /// be the wrong tool.
    int poisson(double rate) {
        if (rate < 0.0) throw std::invalid_argument("poisson: negative rate");
        if (rate == 0.0) return 0;
        if (rate > 64.0) throw std::invalid_argument("poisson: rate too large for product method");
        const double limit = std::exp(-rate);
        int k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    /// Index draw from cumulative probabilities (last entry must be ~1).
    int categorical(const std::vector<double>& cdf) {
        const double u = uniform();
        for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
            if (u <= cdf[i]) return static_cast<int>(i);
        return static_cast<int>(cdf.size()) - 1;
    }

private:
    std::uint32_t next_u32() {
        if (avail_ == 0) {
            block_ = philox(ctr_, key_);
            avail_ = 4;
            if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter
        }
        return block_[4 - avail_--];
    }

    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> x,
                                               std::array<std::uint32_t, 2> k) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * x[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * x[2];
            const std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t l0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t l1 = static_cast<std::uint32_t>(p1);
            x = {h1 ^ x[1] ^ k[0], l1, h0 ^ x[3] ^ k[1], l0};
            k[0] += W0;
            k[1] += W1;
        }
        return x;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int avail_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace tauq
