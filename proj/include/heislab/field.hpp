#ifndef HEISLAB_FIELD_HPP
#define HEISLAB_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/group.hpp"

namespace heis {

enum class OracleKind { analytic, central_difference };

/// Scalar function on H^n together with first and second derivative oracles
/// in flat coordinates (x_1..x_n, y_1..y_n, tau).
///
/// Analytic fields carry user-supplied derivative functions. Fields built from
/// a value function alone fall back to central differences with step h; the
/// mixed second derivative uses the 4-point cross formula.
class SmoothField {
public:
    using ValueFn = std::function<double(const GroupPoint&)>;
    using FirstFn = std::function<double(const GroupPoint&, std::size_t)>;
    using SecondFn = std::function<double(const GroupPoint&, std::size_t, std::size_t)>;

    static SmoothField analytic(ValueFn value, FirstFn first, SecondFn second) {
        SmoothField f;
        f.kind_ = OracleKind::analytic;
        f.value_ = std::move(value);
        f.first_ = std::move(first);
        f.second_ = std::move(second);
        return f;
    }

    static SmoothField finite_difference(ValueFn value, double h = 1e-4) {
        if (!(h > 0.0)) throw ParameterError("finite-difference step must be positive");
        SmoothField f;
        f.kind_ = OracleKind::central_difference;
        f.h_ = h;
        f.value_ = value;
        f.first_ = [value, h](const GroupPoint& p, std::size_t i) {
            GroupPoint a = p, b = p;
            a.set_coord(i, p.coord(i) + h);
            b.set_coord(i, p.coord(i) - h);
            return (value(a) - value(b)) / (2.0 * h);
        };
        f.second_ = [value, h](const GroupPoint& p, std::size_t i, std::size_t j) {
            if (i > j) std::swap(i, j);
            if (i == j) {
                GroupPoint a = p, b = p;
                a.set_coord(i, p.coord(i) + h);
                b.set_coord(i, p.coord(i) - h);
                return (value(a) - 2.0 * value(p) + value(b)) / (h * h);
            }
            auto shifted = [&](double si, double sj) {
                GroupPoint q = p;
                q.set_coord(i, p.coord(i) + si);
                q.set_coord(j, p.coord(j) + sj);
                return value(q);
            };
            return (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) /
                   (4.0 * h * h);
        };
        return f;
    }

    [[nodiscard]] double operator()(const GroupPoint& p) const { return value_(p); }
    [[nodiscard]] double d1(const GroupPoint& p, std::size_t i) const {
        check_index(p, i);
        return first_(p, i);
    }
    [[nodiscard]] double d2(const GroupPoint& p, std::size_t i, std::size_t j) const {
        check_index(p, i);
        check_index(p, j);
        return second_(p, i, j);
    }

    [[nodiscard]] OracleKind kind() const noexcept { return kind_; }
    [[nodiscard]] double step() const noexcept { return h_; }

private:
    SmoothField() = default;

    static void check_index(const GroupPoint& p, std::size_t i) {
        if (i >= p.coords()) throw DimensionError("derivative index out of range");
    }

    OracleKind kind_ = OracleKind::analytic;
    double h_ = 0.0;
    ValueFn value_;
    FirstFn first_;
    SecondFn second_;
};

/// phi(r) on r >= 0 with its first two derivatives.
struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

/// Largest absolute mismatch between the declared derivatives of a profile
/// and central differences at the given sample radii.
inline double radial_profile_consistency(const RadialProfile& phi, const std::vector<double>& radii,
                                         double h = 1e-5) {
    double worst = 0.0;
    for (double r : radii) {
        const double fd1 = (phi.value(r + h) - phi.value(r - h)) / (2.0 * h);
        const double fd2 = (phi.d1(r + h) - phi.d1(r - h)) / (2.0 * h);
        worst = std::max({worst, std::abs(fd1 - phi.d1(r)), std::abs(fd2 - phi.d2(r))});
    }
    return worst;
}

/// Affine self-map p -> M p + c of R^{2n+1}, M stored row-major.
struct AffineMap {
    std::size_t dim = 0;
    std::vector<double> matrix;
    std::vector<double> offset;

    [[nodiscard]] double m(std::size_t row, std::size_t col) const { return matrix[row * dim + col]; }

    [[nodiscard]] GroupPoint apply(const GroupPoint& p) const {
        const auto in = p.flat();
        std::vector<double> out(offset);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) out[r] += m(r, c) * in[c];
        return GroupPoint::from_flat(out);
    }
};

/// Left translation p -> a o p written as an affine map.
inline AffineMap left_translation_map(const GroupPoint& a) {
    const auto n = static_cast<std::size_t>(a.n());
    const std::size_t d = 2 * n + 1;
    AffineMap L{d, std::vector<double>(d * d, 0.0), a.flat()};
    for (std::size_t i = 0; i < d; ++i) L.matrix[i * d + i] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        L.matrix[(d - 1) * d + i] = -2.0 * a.y()[i];
        L.matrix[(d - 1) * d + n + i] = 2.0 * a.x()[i];
    }
    return L;
}

/// Right translation p -> p o a. The fields X_i = d/dx_i + 2 y_i d/dtau and
/// Y_i = d/dy_i - 2 x_i d/dtau commute with this map under the group law
/// above, so Delta_H(f o R_a) = (Delta_H f) o R_a.
inline AffineMap right_translation_map(const GroupPoint& a) {
    const auto n = static_cast<std::size_t>(a.n());
    const std::size_t d = 2 * n + 1;
    AffineMap R{d, std::vector<double>(d * d, 0.0), a.flat()};
    for (std::size_t i = 0; i < d; ++i) R.matrix[i * d + i] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        R.matrix[(d - 1) * d + i] = 2.0 * a.y()[i];
        R.matrix[(d - 1) * d + n + i] = -2.0 * a.x()[i];
    }
    return R;
}

inline AffineMap dilation_map(double lambda, int n) {
    if (!(lambda > 0.0)) throw ParameterError("dilation factor must be positive");
    const auto d = static_cast<std::size_t>(2 * n + 1);
    AffineMap D{d, std::vector<double>(d * d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i + 1 < d; ++i) D.matrix[i * d + i] = lambda;
    D.matrix[d * d - 1] = lambda * lambda;
    return D;
}

/// g = f o A with exact chain rule: grad g = M^T grad f, Hess g = M^T Hess f M.
inline SmoothField pullback(const SmoothField& f, const AffineMap& A) {
    auto F = std::make_shared<const SmoothField>(f);
    auto map = std::make_shared<const AffineMap>(A);
    return SmoothField::analytic(
        [F, map](const GroupPoint& p) { return (*F)(map->apply(p)); },
        [F, map](const GroupPoint& p, std::size_t i) {
            const GroupPoint q = map->apply(p);
            double s = 0.0;
            for (std::size_t a = 0; a < map->dim; ++a)
                if (map->m(a, i) != 0.0) s += map->m(a, i) * F->d1(q, a);
            return s;
        },
        [F, map](const GroupPoint& p, std::size_t i, std::size_t j) {
            const GroupPoint q = map->apply(p);
            double s = 0.0;
            for (std::size_t a = 0; a < map->dim; ++a) {
                if (map->m(a, i) == 0.0) continue;
                for (std::size_t b = 0; b < map->dim; ++b) {
                    if (map->m(b, j) == 0.0) continue;
                    s += map->m(a, i) * F->d2(q, a, b) * map->m(b, j);
                }
            }
            return s;
        });
}

/// f(eta) = phi(|eta|_H) with analytic derivatives through the gauge.
/// Writing N = s^2 + tau^2 = r^4 with s = |x|^2 + |y|^2:
///   dr = dN / (4 r^3),  d2r = d2N / (4 r^3) - 3 dN dN / (16 r^7).
/// Derivatives are undefined at the origin.
inline SmoothField radial_field(RadialProfile phi) {
    auto prof = std::make_shared<const RadialProfile>(std::move(phi));
    auto dN = [](const GroupPoint& p, std::size_t i) {
        const std::size_t tau = p.coords() - 1;
        if (i == tau) return 2.0 * p.tau();
        return 4.0 * p.horizontal_norm2() * p.coord(i);
    };
    auto d2N = [](const GroupPoint& p, std::size_t i, std::size_t j) {
        const std::size_t tau = p.coords() - 1;
        if (i == tau && j == tau) return 2.0;
        if (i == tau || j == tau) return 0.0;
        return 8.0 * p.coord(i) * p.coord(j) + (i == j ? 4.0 * p.horizontal_norm2() : 0.0);
    };
    auto radius = [](const GroupPoint& p) {
        const double r = gauge_norm(p);
        if (!(r > 0.0)) throw DomainError("radial field derivatives are undefined at the origin");
        return r;
    };
    return SmoothField::analytic(
        [prof](const GroupPoint& p) { return prof->value(gauge_norm(p)); },
        [prof, dN, radius](const GroupPoint& p, std::size_t i) {
            const double r = radius(p);
            return prof->d1(r) * dN(p, i) / (4.0 * r * r * r);
        },
        [prof, dN, d2N, radius](const GroupPoint& p, std::size_t i, std::size_t j) {
            const double r = radius(p);
            const double r3 = r * r * r;
            const double ri = dN(p, i) / (4.0 * r3);
            const double rj = dN(p, j) / (4.0 * r3);
            const double rij = d2N(p, i, j) / (4.0 * r3) -
                               3.0 * dN(p, i) * dN(p, j) / (16.0 * r3 * r3 * r);
            return prof->d2(r) * ri * rj + prof->d1(r) * rij;
        });
}

} // namespace heis

#endif
