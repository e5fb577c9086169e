#ifndef HEISLAB_DISPATCH_HPP
#define HEISLAB_DISPATCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/capacity.hpp"
#include "heislab/exponents.hpp"
#include "heislab/fd/simulator.hpp"
#include "heislab/identities.hpp"
#include "heislab/manufactured.hpp"
#include "heislab/report.hpp"
#include "heislab/verdict.hpp"
#include "heislab/weak_form.hpp"

namespace heis {

/// Parsed command line. Unset optionals take per-subcommand defaults.
struct RunSpec {
    std::string subcommand;
    int n = 1;
    std::string q = "2";
    std::optional<double> ell;
    std::optional<double> kappa;
    std::optional<std::vector<double>> T;
    std::optional<std::vector<double>> R;
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> samples;
    std::string format = "csv";
    std::string out;
    std::string config;
    std::string target = "I4";
    double u0 = 0.0;
    double u1 = 0.0;
    std::string equation = "parabolic";

    [[nodiscard]] double q_value() const { return Rational::parse(q).to_double(); }
    [[nodiscard]] Exponents exponents() const { return Exponents::make(n, q_value(), ell, kappa); }
    [[nodiscard]] MCConfig mc(std::uint64_t default_samples) const {
        return {seed, samples.value_or(default_samples), 0};
    }
};

namespace detail {

inline void require_grid(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw ParameterError(std::string(name) + " grid is empty");
    for (double v : g)
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " values must be positive");
}

inline std::vector<double> grid_or(const std::optional<std::vector<double>>& g, std::vector<double> fallback,
                                   const char* name) {
    std::vector<double> v = g.value_or(std::move(fallback));
    require_grid(v, name);
    return v;
}

inline Json fit_json(const ScalingFit& f, std::optional<double> expected) {
    Json j{{"abscissa", to_string(f.kind)},
           {"slope", f.slope},
           {"intercept", f.intercept},
           {"max_relative_residual", f.max_relative_residual},
           {"points", f.points}};
    if (expected) {
        j["expected_slope"] = *expected;
        j["slope_error"] = std::abs(f.slope - *expected);
    }
    return j;
}

inline std::string rational_text(const Rational& r) {
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

inline Report lemma1(const RunSpec& s) {
    const Exponents e = s.exponents();
    Report r;
    r.columns = {"integral", "name", "T", "value", "closed_form", "rel_err"};
    static const char* names[] = {"int phi1^(-1/(q-1)) phi1^q'", "int phi1^(-1/(q-1)) |phi1'|^q'",
                                  "int phi1^(-1/(q-1)) |phi1''|^q'"};
    double worst = 0.0;
    for (double T : grid_or(s.T, {10.0, 100.0}, "T")) {
        for (int k = 0; k < 3; ++k) {
            const double v = time_integral(e, T, k).value;
            const double c = time_integral_constant(e, k) * std::pow(T, time_integral_exponent(e, k));
            const double rel = std::abs(v - c) / std::abs(c);
            worst = std::max(worst, rel);
            r.add_row({"I" + std::to_string(k + 1), std::string(names[k]), T, v, c, rel});
        }
    }
    r.summary = {{"q", e.q},
                 {"ell", e.ell},
                 {"C1", time_integral_constant(e, 0)},
                 {"C2", time_integral_constant(e, 1)},
                 {"C3", time_integral_constant(e, 2)},
                 {"max_rel_err", worst},
                 {"pass", worst <= 1e-8}};
    return r;
}

inline Report lemma2(const RunSpec& s) {
    const Exponents e = s.exponents();
    const MCConfig mc = s.mc(1'000'000);
    const auto Rs = grid_or(s.R, {8.0, 16.0, 32.0, 64.0}, "R");
    Report r;
    std::vector<std::pair<double, double>> pts;
    if (e.is_critical()) {
        const CutoffSpec spec = CutoffSpec::logarithmic(e.kappa);
        r.columns = {"R", "I4", "std_error", "data_integral", "envelope", "quotient"};
        double lo = HUGE_VAL, hi = 0.0;
        for (double R : Rs) {
            const auto c = spatial_integral_critical(e, spec, R, mc);
            const double data = data_integral_critical(e, spec, R, mc).value;
            lo = std::min(lo, c.quotient());
            hi = std::max(hi, c.quotient());
            r.add_row({R, c.value.value, c.value.std_error, data, c.envelope, c.quotient()});
        }
        r.summary = {{"path", "critical"}, {"kappa", e.kappa}, {"quotient_min", lo}, {"quotient_max", hi},
                     {"quotient_spread", hi / lo}};
        return r;
    }
    const CutoffSpec spec = CutoffSpec::default_power(e.q);
    const double expo = e.Q() - 2.0 * e.q_prime();
    r.columns = {"R", "I4", "std_error", "data_integral", "R_power", "C4"};
    for (double R : Rs) {
        const auto f = spatial_integral_subcritical(e, spec, R, mc);
        const double data = data_integral_subcritical(e, spec, R, mc).value;
        const double scale = std::pow(R, expo);
        pts.emplace_back(R, f.value);
        r.add_row({R, f.value, f.std_error, data, scale, f.value / scale});
    }
    r.summary = {{"path", "subcritical"}, {"m", spec.m}};
    if (pts.size() >= 4) r.summary["fit"] = fit_json(scaling_fit(pts, Abscissa::log_R), expo);
    return r;
}

inline Report scaling(const RunSpec& s) {
    const Exponents e = s.exponents();
    Report r;
    r.columns = {"target", "x", "value", "fitted", "residual"};
    std::vector<std::pair<double, double>> pts;
    std::optional<double> expected;
    Abscissa kind = Abscissa::log_R;
    if (s.target == "I1" || s.target == "I2" || s.target == "I3") {
        const int k = s.target[1] - '1';
        kind = Abscissa::log_T;
        expected = time_integral_exponent(e, k);
        for (double T : grid_or(s.T, {1.0, 10.0, 100.0, 1000.0}, "T")) pts.emplace_back(T, time_integral(e, T, k).value);
    } else if (s.target == "I4") {
        const MCConfig mc = s.mc(1'000'000);
        const auto Rs = grid_or(s.R, {8.0, 16.0, 32.0, 64.0}, "R");
        if (e.is_critical()) {
            kind = Abscissa::log_log_R;
            const CutoffSpec spec = CutoffSpec::logarithmic(e.kappa);
            for (double R : Rs) pts.emplace_back(R, spatial_integral_critical(e, spec, R, mc).value.value);
        } else {
            expected = e.Q() - 2.0 * e.q_prime();
            const CutoffSpec spec = CutoffSpec::default_power(e.q);
            for (double R : Rs) pts.emplace_back(R, spatial_integral_subcritical(e, spec, R, mc).value);
        }
    } else {
        throw ParameterError("unknown scaling target '" + s.target + "' (expected I1, I2, I3 or I4)");
    }
    const ScalingFit f = scaling_fit(pts, kind);
    for (const auto& [x, v] : pts) {
        const double a = kind == Abscissa::log_log_R ? std::log(std::log(x)) : std::log(x);
        const double fitted = std::exp(f.intercept + f.slope * a);
        r.add_row({s.target, x, v, fitted, fitted / v - 1.0});
    }
    r.summary = {{"target", s.target}, {"fit", fit_json(f, expected)}};
    return r;
}

inline Report bound(const RunSpec& s, bool hyperbolic) {
    const Exponents e = s.exponents();
    const MCConfig mc = s.mc(1'000'000);
    const auto Ts = grid_or(s.T, {1.0}, "T");
    const auto Rs = grid_or(s.R, {8.0, 16.0, 32.0, 64.0}, "R");
    if (!(s.u0 >= 0.0) || !(s.u1 >= 0.0)) throw ParameterError("data norms must be nonnegative");
    Report r;
    bool critical = false;
    Json rates = Json::array();
    for (double T : Ts) {
        std::vector<std::pair<double, double>> series;
        for (double R : Rs) {
            const CapacityReport c = hyperbolic ? capacity_bound_hyperbolic(e, T, R, s.u0, s.u1, mc)
                                                : capacity_bound_parabolic(e, T, R, s.u0, mc);
            critical = c.critical_path;
            if (r.columns.empty()) {
                r.columns = {"T", "R", "bound"};
                for (const auto& t : c.terms) r.columns.push_back(t.name);
                r.columns.insert(r.columns.end(), {"reference_form", "measured_constant"});
            }
            std::vector<Cell> row{T, R, c.bound};
            for (const auto& t : c.terms) row.emplace_back(t.value);
            row.emplace_back(c.reference_form);
            row.emplace_back(c.measured_constant);
            r.add_row(std::move(row));
            series.emplace_back(R, c.bound);
        }
        for (std::size_t i = 1; i < series.size(); ++i)
            rates.push_back({{"T", T},
                             {"R_from", series[i - 1].first},
                             {"R_to", series[i].first},
                             {"ratio", series[i].second / series[i - 1].second},
                             {"rate", std::log(series[i].second / series[i - 1].second) /
                                          std::log(series[i].first / series[i - 1].first)}});
    }
    r.summary = {{"equation", hyperbolic ? "hyperbolic" : "parabolic"},
                 {"path", critical ? "critical" : "subcritical"},
                 {"young_constant", young_constant(e.q)}};
    if (!critical) {
        r.summary["expected_rate"] = e.Q() - 2.0 * e.q_prime();
        r.summary["expected_ratio_per_doubling"] = std::pow(2.0, e.Q() - 2.0 * e.q_prime());
    }
    r.summary["rates"] = std::move(rates);
    return r;
}

inline Report verdict_report(const RunSpec& s) {
    if (s.n < 1) throw ParameterError("n must be >= 1");
    const Rational q = Rational::parse(s.q);
    if (!(q.to_double() > 1.0)) throw ParameterError("q must exceed 1");
    const Verdict v = verdict(s.n, q);
    const std::string qc = rational_text(critical_exponent(s.n));
    Report r;
    r.columns = {"n", "q", "q_c", "verdict"};
    r.add_row({static_cast<std::int64_t>(s.n), rational_text(q), qc, std::string(to_string(v))});
    r.summary = {{"statement", std::string(to_string(v)) + ", q_c = " + qc}, {"description", describe(v)}};
    return r;
}

inline SmoothField zero_field() {
    return SmoothField::analytic([](const GroupPoint&) { return 0.0; },
                                 [](const GroupPoint&, std::size_t) { return 0.0; },
                                 [](const GroupPoint&, std::size_t, std::size_t) { return 0.0; });
}

/// Zero and manufactured candidates against phi with radius R and horizon T.
/// Parabolic: u = (1 + t) b. Hyperbolic: u = b. b is a bump of radius 0.9 R.
inline Report residual(const RunSpec& s) {
    const Exponents e = s.exponents();
    const bool hyperbolic = s.equation == "hyperbolic";
    if (!hyperbolic && s.equation != "parabolic")
        throw ParameterError("equation must be parabolic or hyperbolic");
    const double R = grid_or(s.R, {2.0}, "R").front();
    const double T = grid_or(s.T, {1.0}, "T").front();
    const WeakFormConfig cfg{s.mc(40'000), 64};
    const auto phi = make_phi_test_function(TemporalFactor(T, e.ell), CutoffSpec::default_power(e.q), R);
    const PolyBump b(GroupPoint::origin(e.n), 0.9 * R);
    const SmoothField bf = b.field();
    const double q = e.q;

    const CandidateSolution zero{[](double, const GroupPoint&) { return 0.0; }, zero_field(), zero_field()};
    const CandidateSolution made =
        hyperbolic ? CandidateSolution{[bf](double, const GroupPoint& p) { return bf(p); }, bf, zero_field()}
                   : CandidateSolution{[bf](double t, const GroupPoint& p) { return (1.0 + t) * bf(p); }, bf, {}};
    std::function<double(double, const GroupPoint&)> defect;
    if (hyperbolic) {
        defect = [bf, q](double, const GroupPoint& p) { return sublaplacian(bf, p) + std::pow(std::abs(bf(p)), q); };
    } else {
        defect = [bf, q](double t, const GroupPoint& p) {
            const double lap = sublaplacian(bf, p);
            return (2.0 + t) * lap + std::pow(std::abs((1.0 + t) * bf(p)), q);
        };
    }
    auto weak = [&](const CandidateSolution& c) {
        return hyperbolic ? weak_residual_hyperbolic(c, q, phi, e.n, cfg) : weak_residual_parabolic(c, q, phi, e.n, cfg);
    };
    const ResidualReport rz = weak(zero), rm = weak(made);
    const MCEstimate d = defect_pairing(defect, phi, e.n, cfg);
    const double se = std::hypot(rm.std_error, d.std_error);
    const double z = se > 0.0 ? std::abs(rm.residual - d.value) / se : (rm.residual == d.value ? 0.0 : HUGE_VAL);

    Report r;
    r.columns = {"candidate", "lhs", "rhs", "residual", "std_error", "defect_pairing", "defect_std_error", "z_score"};
    r.add_row({std::string("zero"), rz.lhs, rz.rhs, rz.residual, rz.std_error, 0.0, 0.0, 0.0});
    r.add_row({std::string("manufactured"), rm.lhs, rm.rhs, rm.residual, rm.std_error, d.value, d.std_error, z});
    r.summary = {{"equation", hyperbolic ? "hyperbolic" : "parabolic"},
                 {"R", R},
                 {"T", T},
                 {"zero_exact", rz.residual == 0.0},
                 {"manufactured_z_score", z},
                 {"pass", rz.residual == 0.0 && z <= 3.0}};
    return r;
}

inline fd::GaussianBump bump_from_json(const Json& j, fd::GaussianBump b) {
    for (const auto& [k, v] : j.items()) {
        if (k == "center") b.center = v.get<std::array<double, 3>>();
        else if (k == "width") b.width = v.get<double>();
        else if (k == "amplitude") b.amplitude = v.get<double>();
        else throw ParameterError("unknown bump key '" + k + "'");
    }
    return b;
}

/// SimConfig from JSON with lower_snake_case keys; absent keys keep defaults.
inline fd::SimConfig sim_config_from_json(const Json& j) {
    if (!j.is_object()) throw ParameterError("simulation config must be a JSON object");
    fd::SimConfig c;
    try {
        for (const auto& [k, v] : j.items()) {
            if (k == "equation") {
                const auto s = v.get<std::string>();
                if (s == "parabolic") c.equation = fd::Equation::parabolic;
                else if (s == "hyperbolic") c.equation = fd::Equation::hyperbolic;
                else throw ParameterError("equation must be parabolic or hyperbolic");
            } else if (k == "n") c.n = v.get<int>();
            else if (k == "q") c.q = v.get<double>();
            else if (k == "nonlinear") c.nonlinear = v.get<bool>();
            else if (k == "dt") c.dt = v.get<double>();
            else if (k == "steps") c.steps = v.get<std::size_t>();
            else if (k == "half_width") c.half_width = v.get<std::array<double, 3>>();
            else if (k == "nodes") c.nodes = v.get<std::array<int, 3>>();
            else if (k == "u0") c.u0 = bump_from_json(v, c.u0);
            else if (k == "u1") c.u1 = bump_from_json(v, c.u1);
            else if (k == "solver_tol") c.solver_tol = v.get<double>();
            else if (k == "max_iter") c.max_iter = v.get<std::size_t>();
            else if (k == "threshold") c.threshold = v.get<double>();
            else if (k == "epsilon") c.epsilon = v.get<double>();
            else throw ParameterError("unknown simulation config key '" + k + "'");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParameterError(std::string("bad simulation config: ") + ex.what());
    }
    c.validate();
    return c;
}

inline Report simulate(const RunSpec& s) {
    fd::SimConfig cfg;
    if (!s.config.empty()) {
        std::ifstream in(s.config);
        if (!in) throw IoError("cannot read config file '" + s.config + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& ex) {
            throw ParameterError(std::string("config is not valid JSON: ") + ex.what());
        }
        cfg = sim_config_from_json(j);
    }
    cfg.validate();
    const fd::SimTrace tr = fd::run(cfg);
    Report r;
    r.columns = {"step", "time", "max_norm", "lq_norm", "iterations"};
    for (const auto& row : tr.rows)
        r.add_row({static_cast<std::int64_t>(row.step), row.time, row.max_norm, row.lq_norm,
                   static_cast<std::int64_t>(row.iterations)});
    r.summary = {{"equation", std::string(fd::to_string(cfg.equation))},
                 {"q", cfg.q},
                 {"nonlinear", cfg.nonlinear},
                 {"dt", cfg.dt},
                 {"nodes", cfg.nodes},
                 {"half_width", cfg.half_width},
                 {"threshold", cfg.threshold},
                 {"regularization", tr.regularization},
                 {"status", std::string(fd::to_string(tr.status))},
                 {"status_step", tr.status_step}};
    if (tr.status == fd::SimStatus::blowup) r.summary["hit_time"] = tr.hit_time;
    if (!tr.message.empty()) r.summary["message"] = tr.message;
    return r;
}

inline Report identities(const RunSpec& s) {
    Report r;
    r.columns = {"check", "points", "max_error", "tolerance", "gated", "pass"};
    auto checks = group_identity_checks(s.seed, 100);
    checks.push_back(selfadjoint_check(s.mc(100'000)));
    for (auto& c : discrete_operator_checks(s.seed)) checks.push_back(std::move(c));
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass();
        r.add_row({c.name, static_cast<std::int64_t>(c.points), c.max_error, c.tolerance, c.gated, c.pass()});
    }
    r.summary = {{"all_pass", all}};
    return r;
}

} // namespace detail

/// Runs one subcommand. Parameter problems raise ParameterError before any
/// engine work; simulation solver failures are reported in the summary.
inline Report dispatch(const RunSpec& s) {
    if (s.format != "csv" && s.format != "json") throw ParameterError("format must be csv or json");
    Report r;
    const std::string& c = s.subcommand;
    if (c == "lemma1") r = detail::lemma1(s);
    else if (c == "lemma2") r = detail::lemma2(s);
    else if (c == "scaling") r = detail::scaling(s);
    else if (c == "bound-parabolic") r = detail::bound(s, false);
    else if (c == "bound-hyperbolic") r = detail::bound(s, true);
    else if (c == "verdict") r = detail::verdict_report(s);
    else if (c == "residual") r = detail::residual(s);
    else if (c == "simulate") r = detail::simulate(s);
    else if (c == "identities") r = detail::identities(s);
    else throw ParameterError("unknown subcommand '" + c + "'");
    r.command = c;
    r.meta.seed = s.seed;
    r.meta.timestamp = report_timestamp();
    return r;
}

/// 0 on completed runs (blow-up included), 3 when a simulation solve failed.
inline int exit_code(const Report& r) {
    const auto it = r.summary.find("status");
    return it != r.summary.end() && *it == "solver_failure" ? 3 : 0;
}

} // namespace heis

#endif
