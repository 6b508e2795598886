#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace metastab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by (seed, stream_id): the seed is the key, the stream
/// id occupies the upper half of the 128-bit counter and the lower half counts
/// blocks. Streams with different ids never overlap, so replica i can draw from
/// stream i regardless of which worker thread runs it.
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    Philox4x32(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          counter_{0u, 0u, static_cast<std::uint32_t>(stream_id),
                   static_cast<std::uint32_t>(stream_id >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            block_ = generate_block(counter_, key_);
            advance_counter();
            pos_ = 0;
        }
        return block_[pos_++];
    }

    /// One Philox block for an explicit counter and key; exposed for tests.
    static std::array<std::uint32_t, 4> generate_block(std::array<std::uint32_t, 4> ctr,
                                                       std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

private:
    void advance_counter() {
        if (++counter_[0] == 0) ++counter_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

/// Standard-normal source bound to one Philox stream.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream_id) : engine_(seed, stream_id) {}

    double operator()() { return normal_(engine_); }
    Philox4x32& engine() { return engine_; }

    template <typename Range>
    void fill(Range& out) {
        for (auto& v : out) v = normal_(engine_);
    }

private:
    Philox4x32 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace metastab
