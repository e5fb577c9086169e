#ifndef HEISLAB_MONTE_CARLO_HPP
#define HEISLAB_MONTE_CARLO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/group.hpp"
#include "heislab/rng.hpp"

namespace heis {

struct MCConfig {
    std::uint64_t seed = 42;
    std::uint64_t samples = 1'000'000;
    unsigned threads = 0; // 0: hardware concurrency
};

/// Monte Carlo estimate of an integral with its standard error.
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Axis-aligned box in flat coordinates.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    [[nodiscard]] std::size_t dim() const noexcept { return lo.size(); }
    [[nodiscard]] double volume() const noexcept {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    [[nodiscard]] bool contains(const Box& inner) const noexcept {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(inner.lo[i] > lo[i] && inner.hi[i] < hi[i])) return false;
        return true;
    }

    /// Smallest box containing the gauge ball |eta|_H <= radius in H^n:
    /// |x_i|, |y_i| <= radius and |tau| <= radius^2.
    static Box gauge_ball(int n, double radius) {
        const auto d = static_cast<std::size_t>(2 * n + 1);
        Box b{std::vector<double>(d, -radius), std::vector<double>(d, radius)};
        b.lo.back() = -radius * radius;
        b.hi.back() = radius * radius;
        return b;
    }
};

namespace detail {

/// Running mean and sum of squared deviations (Welford), mergeable in a
/// fixed order so the reduction is independent of the thread count.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) noexcept {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) noexcept {
        if (o.count == 0.0) return;
        const double n = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / n;
        m2 += o.m2 + d * d * count * o.count / n;
        count = n;
    }
};

inline constexpr std::uint64_t kChunk = 8192;

} // namespace detail

/// Integrates K functions at once over a box by uniform sampling.
/// `fn(point)` returns std::array<double, K>. Sample i always uses the
/// Philox stream (seed, i, stream), and per-chunk moments are merged in chunk
/// order, so results are bit-identical for every thread count.
template <std::size_t K, class Fn>
std::array<MCEstimate, K> mc_integrate_box(const Box& box, Fn&& fn, const MCConfig& cfg,
                                           std::uint32_t stream) {
    if (cfg.samples == 0) throw ParameterError("Monte Carlo sample budget must be positive");
    const std::size_t d = box.dim();
    const std::uint64_t chunks = (cfg.samples + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::array<detail::Moments, K>> partial(chunks);

    auto work = [&](std::uint64_t first_chunk, std::uint64_t step) {
        std::vector<double> flat(d);
        GroupPoint p = GroupPoint::from_flat(std::vector<double>(d, 0.0));
        for (std::uint64_t c = first_chunk; c < chunks; c += step) {
            const std::uint64_t begin = c * detail::kChunk;
            const std::uint64_t end = std::min(cfg.samples, begin + detail::kChunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                SampleStream u(cfg.seed, i, stream);
                for (std::size_t k = 0; k < d; ++k)
                    p.set_coord(k, box.lo[k] + (box.hi[k] - box.lo[k]) * u.next());
                const std::array<double, K> v = fn(p);
                for (std::size_t k = 0; k < K; ++k) partial[c][k].push(v[k]);
            }
        }
    };

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }

    const double vol = box.volume();
    std::array<MCEstimate, K> out{};
    for (std::size_t k = 0; k < K; ++k) {
        detail::Moments total;
        for (const auto& part : partial) total.merge(part[k]);
        const double var = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
        out[k] = {vol * total.mean, vol * std::sqrt(var / total.count), cfg.samples, cfg.seed};
    }
    return out;
}

template <class Fn>
MCEstimate mc_integrate_box(const Box& box, Fn&& fn, const MCConfig& cfg, std::uint32_t stream) {
    return mc_integrate_box<1>(
        box, [&](const GroupPoint& p) { return std::array<double, 1>{fn(p)}; }, cfg, stream)[0];
}

} // namespace heis

#endif
