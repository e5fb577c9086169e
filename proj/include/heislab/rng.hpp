#ifndef HEISLAB_RNG_HPP
#define HEISLAB_RNG_HPP

#include <array>
#include <cstdint>

namespace heis {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: a block of four 32-bit words is a pure function of
/// (counter, key). Monte Carlo draws use counter = (sample index, block,
/// stream tag) and key = seed, so sample i gets the same numbers no matter
/// which thread evaluates it.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
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
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Uniform doubles in the open interval (0, 1) for one sample of one stream.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          sample_(sample), stream_(stream) {}

    double next() noexcept {
        if (used_ == 4) refill();
        const std::uint32_t a = words_[used_++];
        const std::uint32_t b = words_[used_++];
        // 53 random bits, shifted by half an ulp so 0 and 1 are never produced
        const double k = static_cast<double>(a >> 5) * 67108864.0 + static_cast<double>(b >> 6);
        return (k + 0.5) / 9007199254740992.0;
    }

private:
    void refill() noexcept {
        words_ = Philox4x32::generate({static_cast<std::uint32_t>(sample_),
                                       static_cast<std::uint32_t>(sample_ >> 32), block_++, stream_},
                                      key_);
        used_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t sample_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> words_{};
    int used_ = 4;
};

/// Stream tags keep independent estimators on disjoint random sequences even
/// when they share a seed.
namespace streams {
inline constexpr std::uint32_t sphere_constant = 1;
inline constexpr std::uint32_t spatial_integral = 2;
inline constexpr std::uint32_t weak_form = 3;
inline constexpr std::uint32_t self_adjoint = 4;
inline constexpr std::uint32_t volume = 5;
inline constexpr std::uint32_t defect_oracle = 6;
inline constexpr std::uint32_t identities = 7;
} // namespace streams

} // namespace heis

#endif
