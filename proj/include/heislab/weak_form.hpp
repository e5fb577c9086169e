#ifndef HEISLAB_WEAK_FORM_HPP
#define HEISLAB_WEAK_FORM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/errors.hpp"
#include "heislab/field.hpp"
#include "heislab/group.hpp"
#include "heislab/monte_carlo.hpp"
#include "heislab/quadrature.hpp"
#include "heislab/rng.hpp"
#include "heislab/test_functions.hpp"

namespace heis {

/// Candidate u on [0, T] x H^n with its initial data. u1 is the initial
/// velocity of the second-order problem; absent means zero.
struct CandidateSolution {
    std::function<double(double, const GroupPoint&)> u;
    SmoothField u0;
    std::optional<SmoothField> u1;
};

struct WeakFormConfig {
    MCConfig mc{42, 200'000, 0};
    std::size_t time_nodes = 64;
};

/// Both sides of a weak identity. lhs = nonlinear + linear + temporal,
/// rhs = data; std_error is the Monte Carlo error of the residual itself.
struct ResidualReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double std_error = 0.0;
    double nonlinear = 0.0; // int int |u|^q phi
    double linear = 0.0;    // int int u Delta_H phi
    double temporal = 0.0;  // -int int u Delta_H phi_t, or +int int u Delta_H phi_tt
    double data = 0.0;
};

namespace detail {

/// Probe points inside the support: fractions of the radius along x and tau.
inline std::vector<GroupPoint> support_probes(int n, double radius) {
    std::vector<GroupPoint> pts;
    for (double f : {0.25, 0.5, 0.75}) {
        GroupPoint a = GroupPoint::origin(n), b = GroupPoint::origin(n);
        a.set_coord(0, f * radius);
        b.set_coord(static_cast<std::size_t>(2 * n), f * f * radius * radius);
        pts.push_back(a);
        pts.push_back(b);
    }
    return pts;
}

inline void require_terminal(const SpaceTimeTestFunction& phi, int n, bool velocity) {
    const double T = phi.horizon;
    for (const auto& p : support_probes(n, phi.support_radius)) {
        const TestFnEval end = phi(T, p), start = phi(0.0, p);
        const double scale = std::max({1.0, std::abs(start.value), std::abs(start.dt)});
        if (std::abs(end.value) > 1e-12 * scale)
            throw PreconditionError("test function does not vanish at t = T");
        if (velocity && std::abs(end.dt) > 1e-12 * scale)
            throw PreconditionError("time derivative of the test function does not vanish at t = T");
    }
}

inline void require_config(const WeakFormConfig& cfg) {
    if (cfg.time_nodes == 0) throw ParameterError("time quadrature needs at least one node");
}

enum class Order { first, second };

inline ResidualReport weak_residual(const CandidateSolution& c, double q, const SpaceTimeTestFunction& phi,
                                    int n, const WeakFormConfig& cfg, Order order) {
    require_config(cfg);
    if (!(q > 1.0)) throw ParameterError("q must exceed 1");
    require_terminal(phi, n, order == Order::second);
    const auto [ts, ws] = GaussLegendre(cfg.time_nodes).on(0.0, phi.horizon);
    const Box box = Box::gauge_ball(n, phi.support_radius);

    // components: nonlinear, linear, temporal, data, residual
    auto integrand = [&, ts = ts, ws = ws](const GroupPoint& p) {
        double nl = 0.0, lin = 0.0, tmp = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const TestFnEval e = phi(ts[k], p);
            const double u = c.u(ts[k], p);
            nl += ws[k] * std::pow(std::abs(u), q) * e.value;
            lin += ws[k] * u * e.lap;
            tmp += ws[k] * u * (order == Order::first ? -e.lap_dt : e.lap_dtt);
        }
        const TestFnEval e0 = phi(0.0, p);
        double data = 0.0;
        if (order == Order::first) {
            data = c.u0(p) * e0.lap;
        } else {
            data = (c.u1 ? (*c.u1)(p) * e0.lap : 0.0) - c.u0(p) * e0.lap_dt;
        }
        return std::array<double, 5>{nl, lin, tmp, data, nl + lin + tmp - data};
    };
    const auto est = mc_integrate_box<5>(box, integrand, cfg.mc, streams::weak_form);

    ResidualReport r;
    r.nonlinear = est[0].value;
    r.linear = est[1].value;
    r.temporal = est[2].value;
    r.data = est[3].value;
    r.lhs = r.nonlinear + r.linear + r.temporal;
    r.rhs = r.data;
    r.residual = r.lhs - r.rhs;
    r.std_error = est[4].std_error;
    return r;
}

} // namespace detail

/// Residual of int int (|u|^q phi + u Delta_H phi - u Delta_H phi_t) = int u0 Delta_H phi(0).
/// Space by seeded Monte Carlo over the support box, time by Gauss-Legendre.
inline ResidualReport weak_residual_parabolic(const CandidateSolution& c, double q,
                                              const SpaceTimeTestFunction& phi, int n,
                                              const WeakFormConfig& cfg = {}) {
    return detail::weak_residual(c, q, phi, n, cfg, detail::Order::first);
}

/// Residual of int int (|u|^q phi + u Delta_H phi + u Delta_H phi_tt)
///   = int u1 Delta_H phi(0) - int u0 Delta_H phi_t(0).
inline ResidualReport weak_residual_hyperbolic(const CandidateSolution& c, double q,
                                               const SpaceTimeTestFunction& phi, int n,
                                               const WeakFormConfig& cfg = {}) {
    return detail::weak_residual(c, q, phi, n, cfg, detail::Order::second);
}

/// Direct pairing int_0^T int D(t, eta) phi(t, eta) of a strong-form defect D
/// with the test function, on its own sample stream.
inline MCEstimate defect_pairing(const std::function<double(double, const GroupPoint&)>& defect,
                                 const SpaceTimeTestFunction& phi, int n, const WeakFormConfig& cfg = {}) {
    detail::require_config(cfg);
    const auto [ts, ws] = GaussLegendre(cfg.time_nodes).on(0.0, phi.horizon);
    const Box box = Box::gauge_ball(n, phi.support_radius);
    auto integrand = [&, ts = ts, ws = ws](const GroupPoint& p) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) acc += ws[k] * defect(ts[k], p) * phi(ts[k], p).value;
        return acc;
    };
    return mc_integrate_box(box, integrand, cfg.mc, streams::defect_oracle);
}

/// Largest |u(0, p) - u0(p)| over probe points of the test-function support.
inline double initial_data_mismatch(const CandidateSolution& c, const SpaceTimeTestFunction& phi, int n) {
    double worst = 0.0;
    for (const auto& p : detail::support_probes(n, phi.support_radius))
        worst = std::max(worst, std::abs(c.u(0.0, p) - c.u0(p)));
    return worst;
}

/// A field with a box known to contain its support.
struct SupportedField {
    SmoothField field;
    Box support;
};

struct SelfAdjointReport {
    double lhs = 0.0; // int (-Delta_H f) g
    double rhs = 0.0; // int f (-Delta_H g)
    double residual = 0.0;
    double std_error = 0.0;
};

/// |int (-Delta_H f) g - int f (-Delta_H g)| over the box. Both integrands
/// vanish off the intersection of the supports, so sampling is restricted to it.
inline SelfAdjointReport selfadjointness_residual(const SupportedField& f, const SupportedField& g,
                                                  const Box& domain, const MCConfig& mc) {
    if (f.support.dim() != domain.dim() || g.support.dim() != domain.dim())
        throw DimensionError("support boxes and domain differ in dimension");
    if (!domain.contains(f.support) || !domain.contains(g.support))
        throw PreconditionError("support touches the boundary of the domain");
    Box overlap = f.support;
    for (std::size_t i = 0; i < overlap.dim(); ++i) {
        overlap.lo[i] = std::max(f.support.lo[i], g.support.lo[i]);
        overlap.hi[i] = std::min(f.support.hi[i], g.support.hi[i]);
        if (!(overlap.lo[i] < overlap.hi[i])) return {};
    }
    auto integrand = [&](const GroupPoint& p) {
        const double a = -sublaplacian(f.field, p) * g.field(p);
        const double b = f.field(p) * -sublaplacian(g.field, p);
        return std::array<double, 3>{a, b, a - b};
    };
    const auto est = mc_integrate_box<3>(overlap, integrand, mc, streams::self_adjoint);
    return {est[0].value, est[1].value, std::abs(est[2].value), est[2].std_error};
}

} // namespace heis

#endif
