#include <gtest/gtest.h>

#include <cmath>

#include "heislab/weak_form.hpp"

using namespace heis;

namespace {

const WeakFormConfig kCfg{{42, 40'000, 0}, 64};

/// Bump b = (1 - N / rho^4)^3 on N < rho^4 with N = ((x-cx)^2 + (y-cy)^2)^2 + (tau-ct)^2,
/// n = 1, with analytic flat derivatives by the chain rule.
struct Bump {
    double rho = 1.0, cx = 0.0, cy = 0.0, ct = 0.0;

    struct Local {
        double dx, dy, dt, s, N;
    };
    [[nodiscard]] Local local(const GroupPoint& p) const {
        const double dx = p.coord(0) - cx, dy = p.coord(1) - cy, dt = p.coord(2) - ct;
        const double s = dx * dx + dy * dy;
        return {dx, dy, dt, s, s * s + dt * dt};
    }
    [[nodiscard]] double w(double N) const { return 1.0 - N / std::pow(rho, 4); }
    [[nodiscard]] double g(double N) const { return N < std::pow(rho, 4) ? std::pow(w(N), 3) : 0.0; }
    [[nodiscard]] double g1(double N) const {
        return N < std::pow(rho, 4) ? -3.0 / std::pow(rho, 4) * w(N) * w(N) : 0.0;
    }
    [[nodiscard]] double g2(double N) const { return N < std::pow(rho, 4) ? 6.0 / std::pow(rho, 8) * w(N) : 0.0; }

    [[nodiscard]] double value(const GroupPoint& p) const { return g(local(p).N); }

    /// Hand formula for centered bumps: |grad_H N|^2 = 16 s N, Delta_H N = 24 s.
    [[nodiscard]] double sublaplacian_centered(const GroupPoint& p) const {
        const Local l = local(p);
        return g2(l.N) * 16.0 * l.s * l.N + g1(l.N) * 24.0 * l.s;
    }

    [[nodiscard]] SmoothField field() const {
        const Bump b = *this;
        auto grad = [b](const GroupPoint& p) {
            const Local l = b.local(p);
            return std::array<double, 3>{4.0 * l.dx * l.s, 4.0 * l.dy * l.s, 2.0 * l.dt};
        };
        auto hess = [b](const GroupPoint& p, std::size_t i, std::size_t j) {
            const Local l = b.local(p);
            const double d[3] = {l.dx, l.dy, l.dt};
            if (i == 2 || j == 2) return i == j ? 2.0 : 0.0;
            return (i == j ? 4.0 * l.s : 0.0) + 8.0 * d[i] * d[j];
        };
        return SmoothField::analytic(
            [b](const GroupPoint& p) { return b.value(p); },
            [b, grad](const GroupPoint& p, std::size_t i) { return b.g1(b.local(p).N) * grad(p)[i]; },
            [b, grad, hess](const GroupPoint& p, std::size_t i, std::size_t j) {
                const double N = b.local(p).N;
                const auto gr = grad(p);
                return b.g2(N) * gr[i] * gr[j] + b.g1(N) * hess(p, i, j);
            });
    }

    [[nodiscard]] Box support() const {
        return {{cx - rho, cy - rho, ct - rho * rho}, {cx + rho, cy + rho, ct + rho * rho}};
    }
};

SmoothField zero_field() {
    return SmoothField::analytic([](const GroupPoint&) { return 0.0; },
                                 [](const GroupPoint&, std::size_t) { return 0.0; },
                                 [](const GroupPoint&, std::size_t, std::size_t) { return 0.0; });
}

SpaceTimeTestFunction standard_phi(int m = 3, double R = 2.0, double T = 1.0, double ell = 4.0) {
    return make_phi_test_function(TemporalFactor(T, ell), CutoffSpec::power(m), R);
}

GroupPoint pt(double x, double y, double tau) { return {{x}, {y}, tau}; }

} // namespace

TEST(BumpOracle, AnalyticFieldMatchesHandSublaplacian) {
    const Bump b{1.8};
    const auto f = b.field();
    for (const auto& p : {pt(0.3, 0.2, 0.1), pt(1.0, -0.4, 0.7), pt(-0.2, 1.1, -1.5), pt(0.0, 0.0, 2.0)})
        EXPECT_NEAR(sublaplacian(f, p), b.sublaplacian_centered(p), 1e-12);
}

TEST(WeakResidual, ZeroCandidateGivesExactlyZero) {
    const CandidateSolution zero{[](double, const GroupPoint&) { return 0.0; }, zero_field(), zero_field()};
    for (const auto& phi : {standard_phi(3), standard_phi(2, 5.0, 3.0, 6.0)}) {
        const auto p = weak_residual_parabolic(zero, 2.0, phi, 1, kCfg);
        const auto h = weak_residual_hyperbolic(zero, 1.5, phi, 1, kCfg);
        EXPECT_EQ(p.residual, 0.0);
        EXPECT_EQ(p.std_error, 0.0);
        EXPECT_EQ(h.residual, 0.0);
        EXPECT_EQ(h.lhs, 0.0);
        EXPECT_EQ(h.rhs, 0.0);
    }
    const auto psi = make_psi_test_function(TemporalFactor(1.0, 4.0), CutoffSpec::logarithmic(5.0), 30.0);
    EXPECT_EQ(weak_residual_parabolic(zero, 2.0, psi, 1, kCfg).residual, 0.0);
}

TEST(WeakResidual, ParabolicMatchesDirectDefect) {
    const Bump b{1.8};
    const double q = 2.0;
    const CandidateSolution c{[b](double t, const GroupPoint& p) { return (1.0 + t) * b.value(p); }, b.field(), {}};
    const auto phi = standard_phi();
    EXPECT_EQ(initial_data_mismatch(c, phi, 1), 0.0);
    // D = d_t Delta_H u + Delta_H u + |u|^q
    auto defect = [b, q](double t, const GroupPoint& p) {
        const double lap = b.sublaplacian_centered(p);
        return lap + (1.0 + t) * lap + std::pow(std::abs((1.0 + t) * b.value(p)), q);
    };
    const auto r = weak_residual_parabolic(c, q, phi, 1, kCfg);
    const auto d = defect_pairing(defect, phi, 1, kCfg);
    EXPECT_GT(std::abs(r.residual), 10.0 * r.std_error);
    EXPECT_NEAR(r.residual, d.value, 3.0 * std::hypot(r.std_error, d.std_error));
    EXPECT_NEAR(r.lhs - r.rhs, r.residual, 1e-12 * std::abs(r.lhs));
}

TEST(WeakResidual, HyperbolicStaticCandidateMatchesDirectDefect) {
    const Bump b{1.8};
    const double q = 3.0;
    const CandidateSolution c{[b](double, const GroupPoint& p) { return b.value(p); }, b.field(), zero_field()};
    const auto phi = standard_phi();
    auto defect = [b, q](double, const GroupPoint& p) {
        return b.sublaplacian_centered(p) + std::pow(std::abs(b.value(p)), q);
    };
    const auto r = weak_residual_hyperbolic(c, q, phi, 1, kCfg);
    const auto d = defect_pairing(defect, phi, 1, kCfg);
    EXPECT_GT(std::abs(r.residual), 10.0 * r.std_error);
    EXPECT_NEAR(r.residual, d.value, 3.0 * std::hypot(r.std_error, d.std_error));
    // a missing velocity is the zero velocity
    const CandidateSolution c2{c.u, c.u0, {}};
    EXPECT_EQ(weak_residual_hyperbolic(c2, q, phi, 1, kCfg).residual, r.residual);
}

TEST(WeakResidual, HomogeneityBookkeeping) {
    const Bump b{1.8};
    const CandidateSolution c{[b](double t, const GroupPoint& p) { return (1.0 + t) * b.value(p); }, b.field(), {}};
    const Bump b2 = b;
    const auto f2 = SmoothField::analytic([b2](const GroupPoint& p) { return 2.0 * b2.value(p); },
                                          [](const GroupPoint&, std::size_t) { return 0.0; },
                                          [](const GroupPoint&, std::size_t, std::size_t) { return 0.0; });
    const CandidateSolution c2{[b](double t, const GroupPoint& p) { return 2.0 * (1.0 + t) * b.value(p); }, f2, {}};
    const auto phi = standard_phi();
    const auto r1 = weak_residual_parabolic(c, 2.0, phi, 1, kCfg);
    const auto r2 = weak_residual_parabolic(c2, 2.0, phi, 1, kCfg);
    EXPECT_DOUBLE_EQ(r2.nonlinear, 4.0 * r1.nonlinear);
    EXPECT_DOUBLE_EQ(r2.linear, 2.0 * r1.linear);
    EXPECT_DOUBLE_EQ(r2.temporal, 2.0 * r1.temporal);
    EXPECT_DOUBLE_EQ(r2.data, 2.0 * r1.data);
    EXPECT_NEAR(r2.residual, 4.0 * r1.nonlinear + 2.0 * (r1.linear + r1.temporal - r1.data),
                1e-12 * std::abs(r2.lhs));
}

TEST(WeakResidual, LinearInTheTestFunction) {
    const Bump b{1.8};
    const CandidateSolution c{[b](double t, const GroupPoint& p) { return std::exp(-t) * b.value(p); },
                              b.field(), b.field()};
    const auto a = standard_phi(2), d = standard_phi(4);
    const auto s = a + d;
    for (bool hyper : {false, true}) {
        auto run = [&](const SpaceTimeTestFunction& phi) {
            return hyper ? weak_residual_hyperbolic(c, 2.0, phi, 1, kCfg) : weak_residual_parabolic(c, 2.0, phi, 1, kCfg);
        };
        const auto ra = run(a), rd = run(d), rs = run(s);
        const double scale = std::abs(ra.lhs) + std::abs(rd.lhs) + std::abs(ra.rhs) + std::abs(rd.rhs);
        EXPECT_NEAR(rs.residual, ra.residual + rd.residual, 1e-10 * scale);
        EXPECT_NEAR(rs.nonlinear, ra.nonlinear + rd.nonlinear, 1e-10 * scale);
        EXPECT_NEAR(rs.data, ra.data + rd.data, 1e-10 * scale);
    }
}

TEST(WeakResidual, TerminalConditionsAreEnforced) {
    const Bump b{1.0};
    const CandidateSolution c{[b](double, const GroupPoint& p) { return b.value(p); }, b.field(), {}};
    const auto phi = standard_phi();
    const SpaceTimeTestFunction reversed{phi.horizon, phi.support_radius, [phi](double t, const GroupPoint& p) {
                                             TestFnEval e = phi(phi.horizon - t, p);
                                             e.dt = -e.dt;
                                             e.lap_dt = -e.lap_dt;
                                             return e;
                                         }};
    EXPECT_THROW(weak_residual_parabolic(c, 2.0, reversed, 1, kCfg), PreconditionError);
    EXPECT_THROW(weak_residual_hyperbolic(c, 2.0, reversed, 1, kCfg), PreconditionError);
    // ell = 1 vanishes at T but its time derivative does not
    const auto linear_in_time = standard_phi(3, 2.0, 1.0, 1.0);
    EXPECT_NO_THROW(weak_residual_parabolic(c, 2.0, linear_in_time, 1, WeakFormConfig{{1, 1000, 1}, 8}));
    EXPECT_THROW(weak_residual_hyperbolic(c, 2.0, linear_in_time, 1, kCfg), PreconditionError);
    EXPECT_THROW(weak_residual_parabolic(c, 2.0, phi, 1, WeakFormConfig{{1, 1000, 1}, 0}), ParameterError);
    EXPECT_THROW(weak_residual_parabolic(c, 1.0, phi, 1, kCfg), ParameterError);
}

TEST(WeakResidual, DeterministicAcrossThreadCounts) {
    const Bump b{1.8};
    const CandidateSolution c{[b](double t, const GroupPoint& p) { return (1.0 + t) * b.value(p); }, b.field(), {}};
    const auto phi = standard_phi();
    const auto a = weak_residual_parabolic(c, 2.0, phi, 1, WeakFormConfig{{7, 50'000, 1}, 16});
    const auto d = weak_residual_parabolic(c, 2.0, phi, 1, WeakFormConfig{{7, 50'000, 5}, 16});
    EXPECT_EQ(a.residual, d.residual);
    EXPECT_EQ(a.std_error, d.std_error);
}

TEST(SelfAdjointness, EqualFieldsGiveExactlyZero) {
    const Bump b{1.2};
    const SupportedField f{b.field(), b.support()};
    const auto r = selfadjointness_residual(f, f, Box::gauge_ball(1, 3.0), MCConfig{3, 100'000, 0});
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_EQ(r.lhs, r.rhs);
}

TEST(SelfAdjointness, DisjointSupportsVanish) {
    const Bump a{0.8, -1.5, 0.0, 0.0}, b{0.8, 1.5, 0.0, 0.0};
    const auto r = selfadjointness_residual({a.field(), a.support()}, {b.field(), b.support()},
                                            Box::gauge_ball(1, 3.0), MCConfig{3, 100'000, 0});
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_EQ(r.residual, 0.0);
}

TEST(SelfAdjointness, OverlappingBumpsWithinFiveSigma) {
    const Bump a{1.2, 0.0, 0.0, 0.0}, b{1.0, 0.6, -0.3, 0.4};
    const Box domain = Box::gauge_ball(1, 3.0);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = selfadjointness_residual({a.field(), a.support()}, {b.field(), b.support()}, domain,
                                                MCConfig{seed, 400'000, 0});
        EXPECT_GT(std::abs(r.lhs), 1e-2);
        EXPECT_GT(r.std_error, 0.0);
        EXPECT_LE(r.residual, 5.0 * r.std_error) << seed;
    }
}

TEST(SelfAdjointness, SupportTouchingTheBoundaryIsRejected) {
    const Bump a{1.2};
    const Box tight = a.support();
    EXPECT_THROW(selfadjointness_residual({a.field(), a.support()}, {a.field(), a.support()}, tight,
                                          MCConfig{3, 1000, 0}),
                 PreconditionError);
}
