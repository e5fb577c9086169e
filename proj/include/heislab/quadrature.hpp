#ifndef HEISLAB_QUADRATURE_HPP
#define HEISLAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <algorithm>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heislab/errors.hpp"

namespace heis {

/// Deterministic integral value with an absolute error estimate.
struct QuadratureEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    std::uint64_t nodes = 0;
};

namespace detail {

template <class Fn>
void adaptive_gk(Fn& f, double a, double b, double target, unsigned depth, QuadratureEstimate& acc) {
    double err = 0.0;
    // max_depth = 0: a single 61-point Kronrod / 30-point Gauss pair on [a, b].
    // Boost reports the pair difference on [-1, 1]; rescale it to [a, b].
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &err);
    err *= 0.5 * std::abs(b - a);
    if (!std::isfinite(v)) throw DomainError("integrand is not finite on the integration interval");
    acc.nodes += 61;
    if (err <= target || depth == 0) {
        acc.value += v;
        acc.abs_error += err;
        return;
    }
    const double mid = 0.5 * (a + b);
    adaptive_gk(f, a, mid, 0.5 * target, depth - 1, acc);
    adaptive_gk(f, mid, b, 0.5 * target, depth - 1, acc);
}

} // namespace detail

/// Adaptive 61-point Gauss-Kronrod on [a, b] by interval bisection. The error
/// estimate is the summed |Kronrod - Gauss| difference over the final panels.
template <class Fn>
QuadratureEstimate integrate_adaptive(Fn&& f, double a, double b, double rel_tol = 1e-12,
                                      double abs_tol = 0.0, unsigned max_depth = 24) {
    auto g = [&f](double x) { return static_cast<double>(f(x)); };
    QuadratureEstimate coarse;
    detail::adaptive_gk(g, a, b, std::numeric_limits<double>::infinity(), 0, coarse);
    const double target = std::max(abs_tol, rel_tol * std::abs(coarse.value));
    QuadratureEstimate acc;
    detail::adaptive_gk(g, a, b, target, max_depth, acc);
    acc.nodes += coarse.nodes;
    return acc;
}

/// Gauss-Legendre rule on [-1, 1], nodes ascending; Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
        if (n == 0) throw ParameterError("Gauss-Legendre rule needs at least one node");
        if (n == 1) {
            nodes[0] = 0.0;
            weights[0] = 2.0;
            return;
        }
        const auto N = static_cast<double>(n);
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= n; ++k) {
                    const auto K = static_cast<double>(k);
                    const double pk = ((2.0 * K - 1.0) * x * p1 - (K - 1.0) * p0) / K;
                    p0 = p1;
                    p1 = pk;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
    }

    /// Nodes and weights mapped to [a, b].
    [[nodiscard]] std::pair<std::vector<double>, std::vector<double>> on(double a, double b) const {
        std::vector<double> x(nodes.size()), w(nodes.size());
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            x[i] = mid + half * nodes[i];
            w[i] = half * weights[i];
        }
        return {std::move(x), std::move(w)};
    }
};

} // namespace heis

#endif
