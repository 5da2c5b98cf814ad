#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace icrm {

/// Philox4x32-10 block function (Salmon et al.). Pure: one 128-bit counter
/// and a 64-bit key map to four 32-bit outputs.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint64_t kMul0 = 0xD2511F53;
    constexpr std::uint64_t kMul1 = 0xCD9E8D57;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = kMul0 * ctr[0];
        const std::uint64_t p1 = kMul1 * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Identifies an independent random substream by a master seed and a path of
/// child indices. Only the hashed key is kept; two streams with different
/// paths get different keys (up to 64-bit hash collisions).
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed) noexcept
        : master_seed_(master_seed), key_(mix64(master_seed ^ 0x6A09E667F3BCC909ULL)) {}

    static RngStream from_path(std::uint64_t master_seed,
                               std::span<const std::uint64_t> path) noexcept {
        RngStream s(master_seed);
        for (auto idx : path) s = s.child(idx);
        return s;
    }
    static RngStream from_path(std::uint64_t master_seed,
                               std::initializer_list<std::uint64_t> path) noexcept {
        return from_path(master_seed, std::span<const std::uint64_t>(path.begin(), path.size()));
    }

    [[nodiscard]] RngStream child(std::uint64_t index) const noexcept {
        RngStream s = *this;
        s.key_ = mix64(key_ + 0x9E3779B97F4A7C15ULL * (index + 1)) ^ mix64(~key_ + index);
        ++s.depth_;
        return s;
    }

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_seed_; }
    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] std::uint32_t depth() const noexcept { return depth_; }

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    std::uint64_t master_seed_;
    std::uint64_t key_;
    std::uint32_t depth_ = 0;
};

/// Sequential reader over a counter-based stream. The output at 32-bit draw
/// index d depends only on (stream, d), so an engine can be rebuilt at any
/// position without replaying earlier draws.
class RandomEngine {
public:
    using result_type = std::uint64_t;

    explicit RandomEngine(const RngStream& stream, std::uint64_t first_draw = 0) noexcept
        : key_{static_cast<std::uint32_t>(stream.key()),
               static_cast<std::uint32_t>(stream.key() >> 32)} {
        seek(first_draw);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    result_type operator()() noexcept { return next_u64(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); safe as a log() argument.
    double uniform_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// True with probability p (resolution 2^-32; exact at p = 0 and p = 1).
    bool bernoulli(double p) noexcept {
        return static_cast<double>(next_u32()) < p * 4294967296.0;
    }

    /// Number of 32-bit words consumed so far.
    [[nodiscard]] std::uint64_t draw_index() const noexcept { return block_ * 4 - (4 - pos_); }

    void seek(std::uint64_t draw) noexcept {
        block_ = draw / 4;
        refill();
        pos_ = static_cast<unsigned>(draw % 4);
    }

private:
    void refill() noexcept {
        buffer_ = philox4x32({static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                             key_);
        ++block_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> buffer_{};
    std::uint64_t block_ = 0;
    unsigned pos_ = 4;
};

}  // namespace icrm
