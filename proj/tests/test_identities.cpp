#include <gtest/gtest.h>

#include <cmath>

#include "heislab/calculus.hpp"
#include "heislab/identities.hpp"
#include "heislab/manufactured.hpp"

using namespace heis;

TEST(PolyBump, CenteredSublaplacianMatchesHandFormula) {
    const double rho = 1.3, r4 = std::pow(rho, 4);
    const PolyBump b(GroupPoint::origin(1), rho);
    const SmoothField f = b.field();
    for (double x : {0.1, 0.4, -0.7}) {
        for (double t : {0.0, 0.3, -0.5}) {
            const GroupPoint p({x}, {0.5 * x + 0.1}, t);
            const double s = p.horizontal_norm2(), N = s * s + t * t;
            const double w = 1.0 - N / r4;
            const double g1 = -3.0 * w * w / r4, g2 = 6.0 * w / (r4 * r4);
            EXPECT_NEAR(sublaplacian(f, p), g2 * 16.0 * s * N + g1 * 24.0 * s, 1e-12);
        }
    }
}

TEST(PolyBump, OffsetDerivativesMatchFiniteDifferences) {
    const PolyBump b(GroupPoint({0.3, -0.2}, {0.1, 0.4}, 0.2), 1.1);
    const SmoothField exact = b.field();
    const SmoothField fd = SmoothField::finite_difference([&](const GroupPoint& p) { return b.value(p); }, 1e-4);
    const GroupPoint p({0.5, -0.1}, {0.0, 0.6}, -0.1);
    EXPECT_NEAR(sublaplacian(exact, p), sublaplacian(fd, p), 1e-5);
    for (std::size_t i = 0; i < p.coords(); ++i) EXPECT_NEAR(exact.d1(p, i), fd.d1(p, i), 1e-7);
}

TEST(PolyBump, SupportBoxAndPositivity) {
    const PolyBump b(GroupPoint({1.0}, {2.0}, 3.0), 0.5);
    const Box s = b.support();
    EXPECT_DOUBLE_EQ(s.lo[0], 0.5);
    EXPECT_DOUBLE_EQ(s.hi[1], 2.5);
    EXPECT_DOUBLE_EQ(s.lo[2], 2.75);
    EXPECT_DOUBLE_EQ(b.value(GroupPoint({1.0}, {2.0}, 3.0)), 1.0);
    EXPECT_EQ(b.value(GroupPoint({1.6}, {2.0}, 3.0)), 0.0);
    EXPECT_THROW(PolyBump(GroupPoint::origin(1), 0.0), ParameterError);
}

TEST(Identities, GroupChecksPassOnHundredPoints) {
    const auto checks = group_identity_checks(7, 100);
    ASSERT_EQ(checks.size(), 6u);
    for (const auto& c : checks) {
        EXPECT_EQ(c.points, 100u);
        EXPECT_TRUE(c.pass()) << c.name << " " << c.max_error;
    }
}

TEST(Identities, LeftTranslationIsReportedNotGated) {
    const auto checks = group_identity_checks(7, 20);
    const auto& left = checks[3];
    EXPECT_FALSE(left.gated);
    EXPECT_GT(left.max_error, 1e-3);
}

TEST(Identities, ChecksAreDeterministic) {
    const auto a = group_identity_checks(11, 10), b = group_identity_checks(11, 10);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_error, b[i].max_error);
}

TEST(Identities, SelfAdjointWithinFiveSigma) {
    const IdentityCheck c = selfadjoint_check({42, 100'000, 0});
    EXPECT_EQ(c.points, 3u);
    EXPECT_TRUE(c.pass()) << c.max_error;
}

TEST(Identities, DiscreteOperatorSymmetricAndPositive) {
    const auto checks = discrete_operator_checks(5, 100);
    ASSERT_EQ(checks.size(), 2u);
    EXPECT_EQ(checks[0].max_error, 0.0);
    EXPECT_LT(checks[1].max_error, 0.0);
    for (const auto& c : checks) EXPECT_TRUE(c.pass()) << c.name;
}
