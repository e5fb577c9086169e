#ifndef HEISLAB_TEST_FUNCTIONS_HPP
#define HEISLAB_TEST_FUNCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "heislab/cutoff.hpp"
#include "heislab/errors.hpp"
#include "heislab/group.hpp"

namespace heis {

/// Space-time test function sample: value, time derivatives, and the
/// sub-Laplacian of each. For a product phi_1(t) phi_2(eta) the Laplacian
/// entries factor as (d_t^k phi_1) * Delta_H phi_2.
struct TestFnEval {
    double value = 0.0;
    double dt = 0.0;
    double dtt = 0.0;
    double lap = 0.0;
    double lap_dt = 0.0;
    double lap_dtt = 0.0;

    TestFnEval& operator+=(const TestFnEval& o) {
        value += o.value;
        dt += o.dt;
        dtt += o.dtt;
        lap += o.lap;
        lap_dt += o.lap_dt;
        lap_dtt += o.lap_dtt;
        return *this;
    }
};

/// Spatial factor of a separable test function: phi_2 and Delta_H phi_2.
struct SpatialEval {
    double value = 0.0;
    double lap = 0.0;
};

inline TestFnEval separable(const TemporalFactor& tf, double t, const SpatialEval& sp) {
    const double a0 = temporal_eval(tf, t, 0);
    const double a1 = temporal_eval(tf, t, 1);
    const double a2 = temporal_eval(tf, t, 2);
    return {a0 * sp.value, a1 * sp.value, a2 * sp.value, a0 * sp.lap, a1 * sp.lap, a2 * sp.lap};
}

// ---------------------------------------------------------------------------
// Power family: phi_2(eta) = Phi(|eta|_H^2 / R^2)
// ---------------------------------------------------------------------------

/// Radial bracket of Delta_H phi_2 without the anisotropy weight:
///   (4 r^2 / R^4) Phi''(r^2/R^2) + (2Q / R^2) Phi'(r^2/R^2).
inline double phi_radial_bracket(const CutoffSpec& spec, double R, int Q, double r) {
    const Jet c = cutoff_eval(spec, r * r / (R * R));
    return 4.0 * r * r / (R * R * R * R) * c.d2 + 2.0 * Q / (R * R) * c.d1;
}

inline SpatialEval phi_spatial(const CutoffSpec& spec, double R, const GroupPoint& p) {
    if (spec.family != CutoffFamily::power)
        throw ParameterError("phi test function needs a power-family cutoff");
    if (!(R > 0.0)) throw ParameterError("R must be positive");
    const double r = gauge_norm(p);
    const double z = r * r / (R * R);
    const double v = cutoff_eval(spec, z).value;
    // Phi is constant on [0, 1/2], so the Laplacian vanishes there (origin included).
    if (z <= 0.5 || z >= 1.0) return {v, 0.0};
    const int Q = 2 * p.n() + 2;
    return {v, anisotropy_weight(p) * phi_radial_bracket(spec, R, Q, r)};
}

inline TestFnEval phi_eval(const TemporalFactor& tf, const CutoffSpec& spec, double R, double t,
                           const GroupPoint& p) {
    return separable(tf, t, phi_spatial(spec, R, p));
}

// ---------------------------------------------------------------------------
// Logarithmic family: psi_2(eta) = Psi^kappa( ln(r/sqrt R) / ln(sqrt R) )
// ---------------------------------------------------------------------------

/// r^2 times the radial operator d^2/dr^2 + (Q-1)/r d/dr applied to psi_2,
/// as a function of z = ln r / L - 1 with L = ln sqrt R. Three terms in
/// Psi^{k-2} (Psi')^2, Psi^{k-1} Psi'', and Psi^{k-1} Psi'.
inline double psi_scaled_bracket(const CutoffSpec& spec, double L, int Q, double z) {
    const Jet c = cutoff_eval(spec, z);
    if (c.d1 == 0.0 && c.d2 == 0.0) return 0.0;
    const double k = spec.kappa;
    return k * (k - 1.0) * std::pow(c.value, k - 2.0) * c.d1 * c.d1 / (L * L) +
           k * std::pow(c.value, k - 1.0) * c.d2 / (L * L) +
           k * (Q - 2.0) * std::pow(c.value, k - 1.0) * c.d1 / L;
}

/// Radial operator d^2/dr^2 + (Q-1)/r d/dr applied to psi_2.
inline double psi_radial_bracket(const CutoffSpec& spec, double R, int Q, double r) {
    const double L = 0.5 * std::log(R);
    return psi_scaled_bracket(spec, L, Q, std::log(r) / L - 1.0) / (r * r);
}

inline SpatialEval psi_spatial(const CutoffSpec& spec, double R, const GroupPoint& p) {
    if (spec.family != CutoffFamily::logarithmic)
        throw ParameterError("psi test function needs a logarithmic-family cutoff");
    if (!(R > 1.0)) throw ParameterError("R must exceed 1 for the logarithmic test function");
    const double r = gauge_norm(p);
    if (!(r > 0.0)) throw DomainError("logarithmic test function is undefined at the origin");
    const double z = std::log(r) / (0.5 * std::log(R)) - 1.0;
    const double v = std::pow(cutoff_eval(spec, z).value, spec.kappa);
    if (z <= 0.0 || z >= 1.0) return {v, 0.0};
    const int Q = 2 * p.n() + 2;
    return {v, anisotropy_weight(p) * psi_radial_bracket(spec, R, Q, r)};
}

inline TestFnEval psi_eval(const TemporalFactor& tf, const CutoffSpec& spec, double R, double t,
                           const GroupPoint& p) {
    return separable(tf, t, psi_spatial(spec, R, p));
}

// ---------------------------------------------------------------------------
// Type-erased space-time test function
// ---------------------------------------------------------------------------

/// A test function on [0, T] x H^n with support inside the gauge ball of
/// radius support_radius.
struct SpaceTimeTestFunction {
    double horizon = 1.0;
    double support_radius = 1.0;
    std::function<TestFnEval(double, const GroupPoint&)> eval;

    TestFnEval operator()(double t, const GroupPoint& p) const { return eval(t, p); }
};

inline SpaceTimeTestFunction make_phi_test_function(TemporalFactor tf, CutoffSpec spec, double R) {
    if (!(R > 0.0)) throw ParameterError("R must be positive");
    return {tf.T, R, [tf, spec, R](double t, const GroupPoint& p) { return phi_eval(tf, spec, R, t, p); }};
}

inline SpaceTimeTestFunction make_psi_test_function(TemporalFactor tf, CutoffSpec spec, double R) {
    if (!(R > 1.0)) throw ParameterError("R must exceed 1 for the logarithmic test function");
    return {tf.T, R, [tf, spec, R](double t, const GroupPoint& p) { return psi_eval(tf, spec, R, t, p); }};
}

/// Pointwise sum; both operands must share the horizon.
inline SpaceTimeTestFunction operator+(SpaceTimeTestFunction a, SpaceTimeTestFunction b) {
    if (a.horizon != b.horizon) throw ParameterError("test functions have different horizons");
    const double support = std::max(a.support_radius, b.support_radius);
    return {a.horizon, support, [a = std::move(a), b = std::move(b)](double t, const GroupPoint& p) {
                TestFnEval e = a(t, p);
                e += b(t, p);
                return e;
            }};
}

} // namespace heis

#endif
