#ifndef HEISLAB_IDENTITIES_HPP
#define HEISLAB_IDENTITIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/fd/sparse.hpp"
#include "heislab/field.hpp"
#include "heislab/group.hpp"
#include "heislab/manufactured.hpp"
#include "heislab/polynomial.hpp"
#include "heislab/rng.hpp"
#include "heislab/weak_form.hpp"

namespace heis {

/// Outcome of one identity over a set of random points. Diagnostic checks
/// report a value without a pass/fail gate.
struct IdentityCheck {
    std::string name;
    std::size_t points = 0;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool gated = true;

    [[nodiscard]] bool pass() const { return !gated || max_error <= tolerance; }
};

namespace detail {

/// Reproducible draws for identity checks: draw k of case i uses Philox
/// stream (seed, i, identities).
struct CaseDraws {
    SampleStream s;
    CaseDraws(std::uint64_t seed, std::uint64_t i) : s(seed, i, streams::identities) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * s.next(); }
    int integer(int lo, int hi) {
        return std::min(hi, lo + static_cast<int>(s.next() * (hi - lo + 1)));
    }
    GroupPoint point(int n, double scale = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(2 * n + 1));
        for (auto& v : c) v = uniform(-scale, scale);
        return GroupPoint::from_flat(c);
    }
    Polynomial polynomial(int n, int terms, int max_degree) {
        Polynomial p(n);
        const int dim = 2 * n + 1;
        for (int t = 0; t < terms; ++t) {
            std::vector<int> pw(static_cast<std::size_t>(dim), 0);
            const int d = integer(0, max_degree);
            for (int k = 0; k < d; ++k) ++pw[static_cast<std::size_t>(integer(0, dim - 1))];
            p.add(uniform(-1.0, 1.0), std::move(pw));
        }
        return p;
    }
};

} // namespace detail

/// Commutator, vanishing brackets, translation invariance, dilation
/// homogeneity, and radial-formula agreement on `points` random points with
/// random polynomial fields in H^2 (so that i != j brackets exist).
inline std::vector<IdentityCheck> group_identity_checks(std::uint64_t seed, std::size_t points = 100,
                                                        double tolerance = 1e-8) {
    const int n = 2;
    IdentityCheck comm{"commutator [X_i,Y_i] = -4 d_tau", points, 0.0, tolerance};
    IdentityCheck brackets{"brackets vanish for i != j", points, 0.0, tolerance};
    IdentityCheck right{"translation invariance p -> p o a", points, 0.0, tolerance};
    IdentityCheck left{"literal left translation p -> a o p (diagnostic)", points, 0.0, 0.0, false};
    IdentityCheck homog{"dilation homogeneity lambda^2", points, 0.0, tolerance};
    IdentityCheck radial{"radial formula agreement", points, 0.0, tolerance};

    const RadialProfile prof{[](double r) { return std::exp(-r * r) * r * r * r; },
                             [](double r) { return std::exp(-r * r) * (3 * r * r - 2 * r * r * r * r); },
                             [](double r) { return std::exp(-r * r) * (6 * r - 14 * r * r * r + 4 * std::pow(r, 5)); }};
    const SmoothField rf = radial_field(prof);

    for (std::size_t k = 0; k < points; ++k) {
        detail::CaseDraws draw(seed, k);
        const SmoothField f = draw.polynomial(n, 8, 4).field();
        const GroupPoint p = draw.point(n), a = draw.point(n);
        const double lam = draw.uniform(0.5, 1.5);
        const std::size_t tau = p.coords() - 1;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    comm.max_error = std::max(
                        comm.max_error, std::abs(commutator(f, i, Horizontal::X, i, Horizontal::Y, p) + 4.0 * f.d1(p, tau)));
                    continue;
                }
                for (auto [A, B] : {std::pair{Horizontal::X, Horizontal::Y}, std::pair{Horizontal::X, Horizontal::X},
                                    std::pair{Horizontal::Y, Horizontal::Y}})
                    brackets.max_error = std::max(brackets.max_error, std::abs(commutator(f, i, A, j, B, p)));
            }
        }
        right.max_error = std::max(right.max_error, std::abs(sublaplacian(pullback(f, right_translation_map(a)), p) -
                                                             sublaplacian(f, compose(p, a))));
        left.max_error = std::max(left.max_error, std::abs(sublaplacian(pullback(f, left_translation_map(a)), p) -
                                                           sublaplacian(f, compose(a, p))));
        homog.max_error = std::max(homog.max_error, std::abs(sublaplacian(pullback(f, dilation_map(lam, n)), p) -
                                                             lam * lam * sublaplacian(f, dilate(lam, p))));
        const GroupPoint q = draw.point(n, 1.5);
        radial.max_error = std::max(radial.max_error, std::abs(sublaplacian(rf, q) - sublaplacian_radial(prof, q)));
    }
    return {comm, brackets, right, left, homog, radial};
}

/// Integration by parts for three overlapping bump pairs in H^1. max_error is
/// the largest residual in units of its Monte Carlo standard error.
inline IdentityCheck selfadjoint_check(const MCConfig& mc, double sigmas = 5.0) {
    auto bump = [](double x, double y, double t, double rho) { return PolyBump(GroupPoint{{x}, {y}, t}, rho); };
    const std::vector<std::pair<PolyBump, PolyBump>> pairs{
        {bump(0.0, 0.0, 0.0, 1.2), bump(0.6, -0.3, 0.4, 1.0)},
        {bump(0.2, 0.1, 0.0, 0.9), bump(-0.3, 0.4, 0.5, 1.1)},
        {bump(0.0, 0.0, 0.0, 1.5), bump(0.5, 0.5, -0.6, 0.7)},
    };
    const Box domain = Box::gauge_ball(1, 3.0);
    IdentityCheck c{"self-adjointness residual / stderr", pairs.size(), 0.0, sigmas};
    for (const auto& [f, g] : pairs) {
        const auto r = selfadjointness_residual({f.field(), f.support()}, {g.field(), g.support()}, domain, mc);
        c.max_error = std::max(c.max_error, r.std_error > 0.0 ? r.residual / r.std_error : (r.residual > 0.0 ? 1e300 : 0.0));
    }
    return c;
}

/// Exact symmetry of L_h and positivity of the Rayleigh quotients of -L_h on
/// random fields. The Rayleigh entry reports -min quotient, which passes at <= 0.
inline std::vector<IdentityCheck> discrete_operator_checks(std::uint64_t seed, std::size_t fields = 100) {
    const fd::Grid g = fd::Grid::make({1.0, 1.0, 2.0}, {11, 11, 11});
    const fd::SparseOperator L = fd::assemble_sublaplacian(g);
    IdentityCheck sym{"discrete operator max |L - L^T|", 1, L.asymmetry(), 0.0};
    double min_quotient = 1e300;
    for (std::size_t k = 0; k < fields; ++k) {
        SampleStream s(seed, 1'000'000 + k, streams::identities);
        std::vector<double> v(L.dim);
        for (double& x : v) x = 2.0 * s.next() - 1.0;
        const auto Lv = L.apply(v);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            num -= v[i] * Lv[i];
            den += v[i] * v[i];
        }
        min_quotient = std::min(min_quotient, num / den);
    }
    IdentityCheck ray{"negative min Rayleigh quotient of -L_h", fields, -min_quotient, 0.0};
    if (min_quotient <= 0.0) ray.max_error = std::max(ray.max_error, 1e-300);
    return {sym, ray};
}

} // namespace heis

#endif
