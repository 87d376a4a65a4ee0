#pragma once

// Counter-based random streams.
//
// Every random draw in the library comes from a Stream: Philox4x32-10 keyed
// by the 64-bit master seed, with the upper half of the 128-bit counter
// holding a 64-bit stream id and the lower half a block counter. Two streams
// with different ids therefore walk disjoint counter ranges of the same
// keyed bijection, so replication i of a run always sees the same numbers
// regardless of how replications are scheduled across threads.
//
//   substream(master, i)  ==  Stream{master, i}
//
// Each stream can emit 2^64 blocks (2^65 64-bit words) before wrapping.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace robmean {

/// Philox4x32 with 10 rounds; one call maps a 128-bit counter to 128 bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept {
        ctr = round(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += kW0;
            key[1] += kW1;
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static constexpr Counter round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// UniformRandomBitGenerator producing 64-bit words from one Philox stream.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t seed = 0, std::uint64_t stream_id = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_{stream_id} {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (have_ == 0) refill();
        return buffer_[--have_];
    }

    std::uint64_t seed() const noexcept {
        return std::uint64_t{key_[0]} | (std::uint64_t{key_[1]} << 32);
    }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    void refill() noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                      static_cast<std::uint32_t>(block_ >> 32),
                                      static_cast<std::uint32_t>(stream_id_),
                                      static_cast<std::uint32_t>(stream_id_ >> 32)};
        const auto out = Philox4x32::apply(ctr, key_);
        ++block_;
        // Served back to front by operator().
        buffer_[1] = std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
        buffer_[0] = std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32);
        have_ = 2;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int have_ = 0;
};

/// Independent stream for replication `index` of a run seeded with `master`.
inline Stream substream(std::uint64_t master, std::uint64_t index) noexcept {
    return Stream{master, index};
}

/// Uniform on [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
template <class Rng>
double uniform01_open_low(Rng& rng) {
    return 1.0 - uniform01(rng);
}

/// Standard normal by Box-Muller; uses two words per call and keeps no cache,
/// so the number of words consumed per draw is fixed.
template <class Rng>
double standard_normal(Rng& rng) {
    const double u1 = uniform01_open_low(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Exp(1).
template <class Rng>
double standard_exponential(Rng& rng) {
    return -std::log(uniform01_open_low(rng));
}

}  // namespace robmean
