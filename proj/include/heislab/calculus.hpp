#ifndef HEISLAB_CALCULUS_HPP
#define HEISLAB_CALCULUS_HPP

#include <cstddef>
#include <string>

#include "heislab/errors.hpp"
#include "heislab/field.hpp"
#include "heislab/group.hpp"

namespace heis {

/// Horizontal fields X_i = d/dx_i + 2 y_i d/dtau and Y_i = d/dy_i - 2 x_i d/dtau.
/// Under the group law in group.hpp they commute with p -> p o a.
enum class Horizontal { X, Y };

namespace detail {

struct FieldComponents {
    std::size_t axis;   // flat index of the d/dx_i or d/dy_i part
    double tau_coeff;   // coefficient of d/dtau at the point
};

inline FieldComponents components(int i, Horizontal kind, const GroupPoint& p) {
    if (i < 0 || i >= p.n())
        throw DimensionError("horizontal field index " + std::to_string(i) + " outside [0, " +
                             std::to_string(p.n()) + ")");
    const auto k = static_cast<std::size_t>(i);
    if (kind == Horizontal::X) return {k, 2.0 * p.y()[k]};
    return {static_cast<std::size_t>(p.n()) + k, -2.0 * p.x()[k]};
}

} // namespace detail

/// (X_i f)(p) or (Y_i f)(p). Field indices are zero-based: i in [0, n).
inline double horizontal_derivative(const SmoothField& f, int i, Horizontal kind, const GroupPoint& p) {
    const auto c = detail::components(i, kind, p);
    const std::size_t tau = p.coords() - 1;
    return f.d1(p, c.axis) + c.tau_coeff * f.d1(p, tau);
}

/// A(B f)(p) for horizontal fields A = (i, a), B = (j, b), expanded with the
/// second-derivative oracle:
///   A(B f) = f_ab + (d_a c_B) f_tau + c_B f_{a tau} + c_A (f_{b tau} + c_B f_{tau tau}).
inline double horizontal_second(const SmoothField& f, int i, Horizontal a, int j, Horizontal b,
                                const GroupPoint& p) {
    const auto A = detail::components(i, a, p);
    const auto B = detail::components(j, b, p);
    const std::size_t tau = p.coords() - 1;
    // d_a of the tau-coefficient of B: c_{Y_j} = -2 x_j, c_{X_j} = 2 y_j.
    double da_cB = 0.0;
    if (i == j && a == Horizontal::X && b == Horizontal::Y) da_cB = -2.0;
    if (i == j && a == Horizontal::Y && b == Horizontal::X) da_cB = 2.0;
    return f.d2(p, A.axis, B.axis) + da_cB * f.d1(p, tau) + B.tau_coeff * f.d2(p, A.axis, tau) +
           A.tau_coeff * (f.d2(p, B.axis, tau) + B.tau_coeff * f.d2(p, tau, tau));
}

/// [A, B] f = A(B f) - B(A f).
inline double commutator(const SmoothField& f, int i, Horizontal a, int j, Horizontal b,
                         const GroupPoint& p) {
    return horizontal_second(f, i, a, j, b, p) - horizontal_second(f, j, b, i, a, p);
}

/// Sub-Laplacian in coordinates:
///   Delta_(x,y) f + 4 |(x,y)|^2 f_{tau tau} + 4 sum_i (y_i f_{x_i tau} - x_i f_{y_i tau}).
inline double sublaplacian(const SmoothField& f, const GroupPoint& p) {
    const auto n = static_cast<std::size_t>(p.n());
    const std::size_t tau = 2 * n;
    double flat = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        flat += f.d2(p, i, i) + f.d2(p, n + i, n + i);
        cross += p.y()[i] * f.d2(p, i, tau) - p.x()[i] * f.d2(p, n + i, tau);
    }
    return flat + 4.0 * p.horizontal_norm2() * f.d2(p, tau, tau) + 4.0 * cross;
}

/// Sub-Laplacian through the sum of squares X_i^2 + Y_i^2; a second route to
/// the same operator.
inline double sublaplacian_sum_of_squares(const SmoothField& f, const GroupPoint& p) {
    double s = 0.0;
    for (int i = 0; i < p.n(); ++i)
        s += horizontal_second(f, i, Horizontal::X, i, Horizontal::X, p) +
             horizontal_second(f, i, Horizontal::Y, i, Horizontal::Y, p);
    return s;
}

/// Sub-Laplacian of eta -> phi(|eta|_H):
///   omega(p) * (phi''(r) + (Q-1)/r phi'(r)),  r = |p|_H.
inline double sublaplacian_radial(const RadialProfile& phi, const GroupPoint& p) {
    const double r = gauge_norm(p);
    if (!(r > 0.0)) throw DomainError("radial sub-Laplacian is undefined at the origin");
    const double Q = 2.0 * p.n() + 2.0;
    return anisotropy_weight(p) * (phi.d2(r) + (Q - 1.0) / r * phi.d1(r));
}

} // namespace heis

#endif
