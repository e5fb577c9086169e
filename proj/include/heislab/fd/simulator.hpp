#ifndef HEISLAB_FD_SIMULATOR_HPP
#define HEISLAB_FD_SIMULATOR_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/fd/cg.hpp"
#include "heislab/fd/grid.hpp"
#include "heislab/fd/sparse.hpp"
#include "heislab/group.hpp"

namespace heis::fd {

enum class Equation { parabolic, hyperbolic };

inline std::string_view to_string(Equation e) { return e == Equation::parabolic ? "parabolic" : "hyperbolic"; }

/// amplitude * exp(-|p - center|^2 / (2 width^2)) in flat coordinates.
struct GaussianBump {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 0.3;
    double amplitude = 1.0;

    [[nodiscard]] double operator()(const GroupPoint& p) const {
        double d2 = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            const double d = p.coord(a) - center[a];
            d2 += d * d;
        }
        return amplitude * std::exp(-d2 / (2.0 * width * width));
    }
};

struct SimConfig {
    Equation equation = Equation::parabolic;
    int n = 1;
    double q = 2.0;
    bool nonlinear = true;
    double dt = 1e-3;
    std::size_t steps = 1000;
    std::array<double, 3> half_width{1.0, 1.0, 1.0};
    std::array<int, 3> nodes{17, 17, 17};
    GaussianBump u0{};
    GaussianBump u1{{0.0, 0.0, 0.0}, 0.3, 0.0};
    double solver_tol = 1e-10;
    std::size_t max_iter = 0; // 0: 10 * unknowns
    double threshold = 1e6;
    double epsilon = 0.0; // tau-regularization weight, off by default

    void validate() const {
        if (n != 1) throw ParameterError("the simulator supports n = 1 only (3-D grids)");
        if (!(q > 1.0)) throw ParameterError("q must exceed 1");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
        if (!(threshold > 0.0)) throw ParameterError("blow-up threshold must be positive");
        if (!(solver_tol > 0.0)) throw ParameterError("solver tolerance must be positive");
        if (!(epsilon >= 0.0)) throw ParameterError("regularization epsilon must be nonnegative");
        if (!(u0.width > 0.0) || !(u1.width > 0.0)) throw ParameterError("bump widths must be positive");
        Grid::make(half_width, nodes);
    }
    [[nodiscard]] Grid grid() const { return Grid::make(half_width, nodes); }
};

enum class SimStatus { completed, blowup, solver_failure };

inline std::string_view to_string(SimStatus s) {
    switch (s) {
    case SimStatus::completed: return "completed";
    case SimStatus::blowup: return "blowup";
    case SimStatus::solver_failure: return "solver_failure";
    }
    return "unknown";
}

struct TraceRow {
    std::size_t step = 0;
    double time = 0.0;
    double max_norm = 0.0;
    double lq_norm = 0.0;
    std::size_t iterations = 0;
};

struct SimTrace {
    std::vector<TraceRow> rows;
    SimStatus status = SimStatus::completed;
    std::size_t status_step = 0;
    double hit_time = 0.0; // time the threshold was reached, blowup only
    std::string message;
    double regularization = 0.0;
    std::vector<double> final_state;
};

/// Forcing-driven part of the step: z solves (-op) z = F(u), F(u) = |u|^q when
/// the nonlinearity is on and 0 otherwise. Then op (z - u) = -op u - F(u).
struct Correction {
    std::vector<double> z;
    std::size_t iterations = 0;
};

inline Correction forcing_solve(const std::vector<double>& u, const SparseOperator& op, const SimConfig& cfg,
                                const std::vector<double>* guess = nullptr) {
    std::vector<double> f(u.size(), 0.0);
    if (cfg.nonlinear)
        for (std::size_t i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u[i]), cfg.q);
    SolveResult s = solve_linear(op, f, cfg.solver_tol, cfg.max_iter, guess);
    return {std::move(s.x), s.iterations};
}

/// Explicit Euler for d_t Delta_H u + Delta_H u + |u|^q = 0: solve
/// op w = -op u - |u|^q for w = d_t u, then u + dt w.
inline std::vector<double> step_parabolic(const std::vector<double>& u, const SparseOperator& op,
                                          const SimConfig& cfg, Correction* work = nullptr) {
    Correction c = forcing_solve(u, op, cfg, work && !work->z.empty() ? &work->z : nullptr);
    std::vector<double> next(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) next[i] = u[i] + cfg.dt * (c.z[i] - u[i]);
    if (work) *work = std::move(c);
    return next;
}

/// a = d_tt u from op a = -op u - |u|^q.
inline std::vector<double> acceleration(const std::vector<double>& u, const SparseOperator& op,
                                        const SimConfig& cfg, Correction* work = nullptr) {
    Correction c = forcing_solve(u, op, cfg, work && !work->z.empty() ? &work->z : nullptr);
    std::vector<double> a(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) a[i] = c.z[i] - u[i];
    if (work) *work = std::move(c);
    return a;
}

/// Taylor start u^1 = u^0 + dt u_1 + (dt^2 / 2) a^0.
inline std::vector<double> hyperbolic_start(const std::vector<double>& u0, const std::vector<double>& u1,
                                            const SparseOperator& op, const SimConfig& cfg,
                                            Correction* work = nullptr) {
    const std::vector<double> a = acceleration(u0, op, cfg, work);
    std::vector<double> next(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i) next[i] = u0[i] + cfg.dt * u1[i] + 0.5 * cfg.dt * cfg.dt * a[i];
    return next;
}

/// Leapfrog for d_tt Delta_H u + Delta_H u + |u|^q = 0:
/// u^{k+1} = 2 u^k - u^{k-1} + dt^2 a^k.
inline std::vector<double> step_hyperbolic(const std::vector<double>& prev, const std::vector<double>& cur,
                                           const SparseOperator& op, const SimConfig& cfg,
                                           Correction* work = nullptr) {
    const std::vector<double> a = acceleration(cur, op, cfg, work);
    std::vector<double> next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = 2.0 * cur[i] - prev[i] + cfg.dt * cfg.dt * a[i];
    return next;
}

/// Steps until cfg.steps, until the max-norm reaches the threshold (or stops
/// being finite), or until a solve fails. Norms are recorded at every step.
inline SimTrace run(const SimConfig& cfg) {
    cfg.validate();
    const Grid g = cfg.grid();
    const SparseOperator op = assemble_sublaplacian(g, cfg.epsilon);
    SimTrace trace;
    trace.regularization = cfg.epsilon;

    GridField u = GridField::sample(g, [&](const GroupPoint& p) { return cfg.u0(p); });
    const GridField v = GridField::sample(g, [&](const GroupPoint& p) { return cfg.u1(p); });
    auto record = [&](std::size_t k, std::size_t iters) {
        trace.rows.push_back({k, static_cast<double>(k) * cfg.dt, max_norm(u.values), lq_norm(u, cfg.q), iters});
    };
    record(0, 0);

    Correction work;
    std::vector<double> prev;
    for (std::size_t k = 1; k <= cfg.steps; ++k) {
        try {
            if (cfg.equation == Equation::parabolic) {
                u.values = step_parabolic(u.values, op, cfg, &work);
            } else if (k == 1) {
                prev = u.values;
                u.values = hyperbolic_start(u.values, v.values, op, cfg, &work);
            } else {
                std::vector<double> next = step_hyperbolic(prev, u.values, op, cfg, &work);
                prev = std::move(u.values);
                u.values = std::move(next);
            }
        } catch (const SolverError& e) {
            trace.status = SimStatus::solver_failure;
            trace.status_step = k;
            trace.message = e.what();
            break;
        }
        record(k, work.iterations);
        const double m = trace.rows.back().max_norm;
        if (!(m < cfg.threshold)) {
            trace.status = SimStatus::blowup;
            trace.status_step = k;
            trace.hit_time = trace.rows.back().time;
            break;
        }
    }
    if (trace.status == SimStatus::completed) trace.status_step = trace.rows.back().step;
    trace.final_state = u.values;
    return trace;
}

} // namespace heis::fd

#endif
