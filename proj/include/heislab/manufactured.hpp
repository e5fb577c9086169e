#ifndef HEISLAB_MANUFACTURED_HPP
#define HEISLAB_MANUFACTURED_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/field.hpp"
#include "heislab/group.hpp"
#include "heislab/monte_carlo.hpp"

namespace heis {

/// Compactly supported C^2 bump b = (1 - N / rho^4)^3 on N < rho^4, where
/// N = |z - c_z|^4 + (tau - c_tau)^2 and z = (x, y). The offset is Euclidean,
/// so N is a polynomial and b has exact derivative oracles.
struct PolyBump {
    GroupPoint center = GroupPoint::origin(1);
    double rho = 1.0;

    PolyBump() = default;
    PolyBump(GroupPoint c, double radius) : center(std::move(c)), rho(radius) {
        if (!(rho > 0.0)) throw ParameterError("bump radius must be positive");
    }

    [[nodiscard]] double value(const GroupPoint& p) const { return field()(p); }

    [[nodiscard]] SmoothField field() const {
        const auto c = center.flat();
        const double r4 = std::pow(rho, 4);
        const std::size_t tau = c.size() - 1;
        struct Local {
            std::vector<double> d;
            double s, N;
        };
        auto local = [c, tau](const GroupPoint& p) {
            Local l{std::vector<double>(c.size()), 0.0, 0.0};
            for (std::size_t i = 0; i < c.size(); ++i) l.d[i] = p.coord(i) - c[i];
            for (std::size_t i = 0; i < tau; ++i) l.s += l.d[i] * l.d[i];
            l.N = l.s * l.s + l.d[tau] * l.d[tau];
            return l;
        };
        auto dN = [tau](const Local& l, std::size_t i) { return i == tau ? 2.0 * l.d[tau] : 4.0 * l.d[i] * l.s; };
        auto d2N = [tau](const Local& l, std::size_t i, std::size_t j) {
            if (i == tau || j == tau) return i == j ? 2.0 : 0.0;
            return 8.0 * l.d[i] * l.d[j] + (i == j ? 4.0 * l.s : 0.0);
        };
        // g(N) = w^3, g' = -3 w^2 / rho^4, g'' = 6 w / rho^8 with w = 1 - N / rho^4
        auto w = [r4](double N) { return N < r4 ? 1.0 - N / r4 : 0.0; };
        return SmoothField::analytic(
            [local, w](const GroupPoint& p) { return std::pow(w(local(p).N), 3); },
            [local, dN, w, r4](const GroupPoint& p, std::size_t i) {
                const Local l = local(p);
                const double v = w(l.N);
                return -3.0 * v * v / r4 * dN(l, i);
            },
            [local, dN, d2N, w, r4](const GroupPoint& p, std::size_t i, std::size_t j) {
                const Local l = local(p);
                const double v = w(l.N);
                return 6.0 * v / (r4 * r4) * dN(l, i) * dN(l, j) - 3.0 * v * v / r4 * d2N(l, i, j);
            });
    }

    /// |z_k - c_k| <= rho, |tau - c_tau| <= rho^2.
    [[nodiscard]] Box support() const {
        const auto c = center.flat();
        Box b{c, c};
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            b.lo[i] -= rho;
            b.hi[i] += rho;
        }
        b.lo.back() -= rho * rho;
        b.hi.back() += rho * rho;
        return b;
    }
};

} // namespace heis

#endif
