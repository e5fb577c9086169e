#ifndef HEISLAB_CAPACITY_HPP
#define HEISLAB_CAPACITY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "heislab/cutoff.hpp"
#include "heislab/errors.hpp"
#include "heislab/exponents.hpp"
#include "heislab/group.hpp"
#include "heislab/monte_carlo.hpp"
#include "heislab/quadrature.hpp"
#include "heislab/test_functions.hpp"

namespace heis {

// ===========================================================================
// Time integrals  I_k(T) = int_0^T phi_1^{-1/(q-1)} |d_t^k phi_1|^{q'} dt
// ===========================================================================

/// Closed-form constant C_{k+1} with I_k(T) = C_{k+1} T^{1 - k q'}.
inline double time_integral_constant(const Exponents& e, int k) {
    const double q = e.q, l = e.ell, qp = e.q_prime();
    if (!(q > 1.0)) throw ParameterError("q must exceed 1");
    switch (k) {
    case 0:
        if (!(l + 1.0 > 0.0)) throw ParameterError("ell + 1 must be positive");
        return 1.0 / (l + 1.0);
    case 1: {
        const double d = l * (q - 1.0) - 1.0;
        if (!(d > 0.0)) throw ParameterError("ell(q-1) - 1 must be positive");
        return (q - 1.0) * std::pow(l, qp) / d;
    }
    case 2: {
        const double d = l * (q - 1.0) - q - 1.0;
        if (!(d > 0.0)) throw ParameterError("ell(q-1) - q - 1 must be positive");
        return (q - 1.0) * std::pow(l * (l - 1.0), qp) / d;
    }
    default: throw ParameterError("time derivative order must be 0, 1 or 2");
    }
}

/// Power of T in I_k(T).
inline double time_integral_exponent(const Exponents& e, int k) { return 1.0 - k * e.q_prime(); }

/// Numerical I_k(T). With s = 1 - t/T the integrand is T s^a, a = ell - k q';
/// the further substitution s = u^{1/(a+1)} removes the endpoint singularity
/// at t = T, after which adaptive Gauss-Kronrod converges to rounding.
inline QuadratureEstimate time_integral(const Exponents& e, double T, int k) {
    if (!(e.q > 1.0)) throw ParameterError("q must exceed 1");
    if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
    if (k < 0 || k > 2) throw ParameterError("time derivative order must be 0, 1 or 2");
    if (k == 1 && !(e.ell > 1.0 / (e.q - 1.0)))
        throw ParameterError("ell must exceed 1/(q-1) for the first time derivative");
    if (k == 2 && !(e.ell > Exponents::ell_bound(e.q)))
        throw ParameterError("ell must exceed (q+1)/(q-1) for the second time derivative");

    const TemporalFactor tf(T, e.ell);
    const double a = e.ell - k * e.q_prime();
    const double p = 1.0 / (a + 1.0);
    auto integrand = [&](double u) {
        const double s = std::pow(u, p);
        const double g = weighted_power(temporal_eval_at_distance(tf, s, 0),
                                        temporal_eval_at_distance(tf, s, k), e.q);
        return T * g * p * std::pow(u, p - 1.0);
    };
    return integrate_adaptive(integrand, 0.0, 1.0, 1e-13);
}

// ===========================================================================
// Gauge-sphere constants  S_w(s) = int_{|eta|_H = 1} omega^s dsigma
// ===========================================================================

namespace detail {

struct SphereCache {
    std::mutex mutex;
    std::map<std::tuple<int, double, std::uint64_t, std::uint64_t>, MCEstimate> table;
};

inline SphereCache& sphere_cache() {
    static SphereCache cache;
    return cache;
}

} // namespace detail

/// S_w(s) from the Monte Carlo integral of omega^s over the gauge annulus
/// 1/2 <= |eta|_H <= 1, scaled by Q / (1 - 2^{-Q}). Results are cached per
/// (n, s, seed, samples); the cache is filled under a lock.
inline MCEstimate sphere_weight_constant(int n, double s, const MCConfig& mc) {
    if (n < 1) throw ParameterError("n must be >= 1");
    if (!(s >= 0.0)) throw ParameterError("weight exponent s must be nonnegative");
    if (mc.samples == 0) throw ParameterError("Monte Carlo sample budget must be positive");

    auto& cache = detail::sphere_cache();
    const auto key = std::make_tuple(n, s, mc.seed, mc.samples);
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.table.find(key); it != cache.table.end()) return it->second;

    const double Q = 2.0 * n + 2.0;
    const double scale = Q / (1.0 - std::pow(2.0, -Q));
    MCEstimate est = mc_integrate_box(
        Box::gauge_ball(n, 1.0),
        [s](const GroupPoint& p) {
            const double r = gauge_norm(p);
            if (r < 0.5 || r > 1.0) return 0.0;
            return std::pow(anisotropy_weight(p), s);
        },
        mc, streams::sphere_constant);
    est.value *= scale;
    est.std_error *= scale;
    cache.table.emplace(key, est);
    return est;
}

// ===========================================================================
// Spatial integrals
// ===========================================================================

/// Product of a deterministic radial integral and a Monte Carlo sphere
/// constant. abs_error carries the quadrature part, std_error the sampling part.
struct FactorizedEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    double std_error = 0.0;
    QuadratureEstimate radial;
    MCEstimate sphere;
};

inline FactorizedEstimate factorize(const QuadratureEstimate& radial, const MCEstimate& sphere) {
    return {radial.value * sphere.value, std::abs(sphere.value) * radial.abs_error,
            std::abs(radial.value) * sphere.std_error, radial, sphere};
}

/// Integrability of Phi^{-1/(q-1)} |Phi''|^{q'} over the transition [1/2, 1].
struct GuardReport {
    bool analytic_ok = false; // m > (q+1)/(3(q-1))
    double coarse = 0.0;      // midpoint rule, 2000 cells
    double fine = 0.0;        // midpoint rule, 4000 cells
    double relative_change = 0.0;

    [[nodiscard]] bool finite() const { return std::isfinite(coarse) && std::isfinite(fine); }
    [[nodiscard]] bool ok() const { return analytic_ok && finite(); }
};

inline GuardReport integrability_guard(double q, const CutoffSpec& spec) {
    if (spec.family != CutoffFamily::power) throw ParameterError("guard applies to the power family");
    if (!(q > 1.0)) throw ParameterError("q must exceed 1");
    GuardReport g;
    g.analytic_ok = spec.m > (q + 1.0) / (3.0 * (q - 1.0));
    auto midpoint = [&](int cells) {
        const double h = 0.5 / cells;
        double sum = 0.0;
        for (int i = 0; i < cells; ++i) {
            const Jet c = cutoff_eval(spec, 0.5 + (i + 0.5) * h);
            sum += weighted_power(c.value, c.d2, q);
        }
        return sum * h;
    };
    g.coarse = midpoint(2000);
    g.fine = midpoint(4000);
    g.relative_change = std::abs(g.fine - g.coarse) / std::max(std::abs(g.fine), 1e-300);
    return g;
}

namespace detail {

inline void require_guard(double q, const CutoffSpec& spec) {
    spec.validate_for(q);
    const GuardReport g = integrability_guard(q, spec);
    if (!g.ok()) throw ParameterError("integrability guard failed for m = " + std::to_string(spec.m));
}

inline void require_critical(const Exponents& e) {
    if (!e.is_critical())
        throw ParameterError("q = " + std::to_string(e.q) + " is not the critical exponent Q/(Q-2) = " +
                             std::to_string(e.critical_q()));
}

/// Radial integrand helpers on the Phi support r in [R/sqrt 2, R].
inline QuadratureEstimate phi_radial(const Exponents& e, const CutoffSpec& spec, double R, bool weighted) {
    const int Q = e.Q();
    auto f = [&](double r) {
        const double b = phi_radial_bracket(spec, R, Q, r);
        const double base = weighted ? cutoff_eval(spec, r * r / (R * R)).value : 1.0;
        return weighted_power(base, b, e.q) * std::pow(r, Q - 1.0);
    };
    return integrate_adaptive(f, R / std::numbers::sqrt2, R, 1e-12);
}

/// Radial integrals on the Psi support r in [sqrt R, R] in the variable
/// z = ln r / L - 1, L = ln sqrt R. Every integrand is g(z) r^{-2q'} up to
/// the Psi factors, so with r^{Q-1} dr = L r^Q dz the r-dependence reduces
/// to r^{Q - 2q'} = exp((Q - 2q') L (1 + z)), which is 1 at the critical
/// exponent and is never formed as a separate power of r.
template <class Scaled>
QuadratureEstimate psi_radial(const Exponents& e, double R, Scaled&& g) {
    const double L = 0.5 * std::log(R);
    const double excess = e.Q() - 2.0 * e.q_prime();
    auto f = [&](double z) { return L * g(z) * std::exp(excess * L * (1.0 + z)); };
    return integrate_adaptive(f, 0.0, 1.0, 1e-12);
}

} // namespace detail

/// I_4(R) = int phi_2^{-1/(q-1)} |Delta_H phi_2|^{q'} d eta, factorized as
/// S_w(q') times a radial quadrature over R/sqrt 2 <= r <= R.
inline FactorizedEstimate spatial_integral_subcritical(const Exponents& e, const CutoffSpec& spec, double R,
                                                       const MCConfig& mc) {
    if (!(R > 0.0)) throw ParameterError("R must be positive");
    detail::require_guard(e.q, spec);
    return factorize(detail::phi_radial(e, spec, R, true), sphere_weight_constant(e.n, e.q_prime(), mc));
}

/// int |Delta_H phi_2|^{q'} d eta, the factor paired with ||u_0||_q by Holder.
inline FactorizedEstimate data_integral_subcritical(const Exponents& e, const CutoffSpec& spec, double R,
                                                    const MCConfig& mc) {
    if (!(R > 0.0)) throw ParameterError("R must be positive");
    spec.validate_for(e.q);
    return factorize(detail::phi_radial(e, spec, R, false), sphere_weight_constant(e.n, e.q_prime(), mc));
}

/// Direct Monte Carlo of I_4 over the bounding box of the gauge ball of
/// radius R, using phi_spatial pointwise. Independent of the factorization.
inline MCEstimate mc_spatial_integral(const Exponents& e, const CutoffSpec& spec, double R, const MCConfig& mc) {
    if (!(R > 0.0)) throw ParameterError("R must be positive");
    spec.validate_for(e.q);
    return mc_integrate_box(
        Box::gauge_ball(e.n, R),
        [&](const GroupPoint& p) {
            const SpatialEval s = phi_spatial(spec, R, p);
            return weighted_power(s.value, s.lap, e.q);
        },
        mc, streams::spatial_integral);
}

/// Critical-exponent spatial factor with the two bounding integrals of the
/// pointwise estimate |Delta_H psi_2| <= C r^{-2} [Psi^{k-2}/ln^2 sqrt R + Psi^{k-1}/ln sqrt R].
struct CriticalSpatialReport {
    double R = 0.0;
    FactorizedEstimate value;
    FactorizedEstimate bound_square_log; // int psi_2^{-1/(q-1)} [psi_2^{(k-2)/k} / (r^2 ln^2 sqrt R)]^{q'}
    FactorizedEstimate bound_single_log; // int psi_2^{-1/(q-1)} [psi_2^{(k-1)/k} / (r^2 ln sqrt R)]^{q'}
    double envelope = 0.0;               // (ln R)^{-Q} + (ln R)^{-Q/2}
    [[nodiscard]] double quotient() const { return value.value / envelope; }
};

inline CriticalSpatialReport spatial_integral_critical(const Exponents& e, const CutoffSpec& spec, double R,
                                                       const MCConfig& mc) {
    detail::require_critical(e);
    if (!(R > 1.0)) throw ParameterError("R must exceed 1");
    spec.validate_for(e.q);
    const int Q = e.Q();
    const double L = 0.5 * std::log(R);
    const double k = spec.kappa;

    CriticalSpatialReport rep;
    rep.R = R;
    rep.value = factorize(detail::psi_radial(e, R,
                                             [&](double z) {
                                                 const double base = std::pow(cutoff_eval(spec, z).value, k);
                                                 return weighted_power(base, psi_scaled_bracket(spec, L, Q, z), e.q);
                                             }),
                          sphere_weight_constant(e.n, e.q_prime(), mc));
    const MCEstimate area = sphere_weight_constant(e.n, 0.0, mc);
    rep.bound_square_log = factorize(detail::psi_radial(e, R,
                                                        [&](double z) {
                                                            const double c = cutoff_eval(spec, z).value;
                                                            return weighted_power(std::pow(c, k),
                                                                                  std::pow(c, k - 2.0) / (L * L), e.q);
                                                        }),
                                     area);
    rep.bound_single_log = factorize(detail::psi_radial(e, R,
                                                        [&](double z) {
                                                            const double c = cutoff_eval(spec, z).value;
                                                            return weighted_power(std::pow(c, k),
                                                                                  std::pow(c, k - 1.0) / L, e.q);
                                                        }),
                                     area);
    const double lnR = std::log(R);
    rep.envelope = std::pow(lnR, -Q) + std::pow(lnR, -0.5 * Q);
    return rep;
}

/// int |Delta_H psi_2|^{q'} d eta at the critical exponent.
inline FactorizedEstimate data_integral_critical(const Exponents& e, const CutoffSpec& spec, double R,
                                                 const MCConfig& mc) {
    detail::require_critical(e);
    if (!(R > 1.0)) throw ParameterError("R must exceed 1");
    spec.validate_for(e.q);
    const int Q = e.Q();
    const double L = 0.5 * std::log(R);
    return factorize(detail::psi_radial(e, R,
                                        [&](double z) {
                                            return weighted_power(1.0, psi_scaled_bracket(spec, L, Q, z), e.q);
                                        }),
                     sphere_weight_constant(e.n, e.q_prime(), mc));
}

// ===========================================================================
// Log-log scaling fits
// ===========================================================================

enum class Abscissa { log_T, log_R, log_log_R };

inline const char* to_string(Abscissa a) {
    switch (a) {
    case Abscissa::log_T: return "log T";
    case Abscissa::log_R: return "log R";
    case Abscissa::log_log_R: return "log log R";
    }
    return "?";
}

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_relative_residual = 0.0; // max |fit / value - 1|
    Abscissa kind = Abscissa::log_R;
    std::size_t points = 0;
};

/// Least-squares line through (transformed abscissa, log value).
inline ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& samples, Abscissa kind) {
    if (samples.size() < 4) throw ParameterError("scaling fit needs at least 4 samples");
    std::vector<double> xs, ys;
    for (const auto& [x, v] : samples) {
        if (!(v > 0.0)) throw ParameterError("scaling fit needs positive values");
        if (!(x > 0.0) || (kind == Abscissa::log_log_R && !(x > 1.0)))
            throw ParameterError("scaling fit abscissa out of range for its log transform");
        xs.push_back(kind == Abscissa::log_log_R ? std::log(std::log(x)) : std::log(x));
        ys.push_back(std::log(v));
    }
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw ParameterError("scaling fit needs distinct abscissae");
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.kind = kind;
    fit.points = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.max_relative_residual = std::max(fit.max_relative_residual,
                                             std::abs(std::expm1(fit.intercept + fit.slope * xs[i] - ys[i])));
    return fit;
}

// ===========================================================================
// Young constant and a-priori bounds
// ===========================================================================

/// C(q) = (q/4)^{1-q'} / q' from the eps-Young inequality with eps = q/4.
inline double young_constant(double q) {
    if (!(q > 1.0)) throw ParameterError("q must exceed 1");
    const double qp = q / (q - 1.0);
    return std::pow(q / 4.0, 1.0 - qp) / qp;
}

struct NamedValue {
    std::string name;
    double value = 0.0;
};

/// Right-hand side of the capacity inequality for one (T, R).
struct CapacityReport {
    double bound = 0.0;             // sum of terms
    std::vector<NamedValue> terms;  // addends of the bound
    std::vector<NamedValue> parameters;
    bool critical_path = false;
    double reference_form = 0.0;    // R/T scaling the bound is compared against
    double measured_constant = 0.0; // bound / reference_form
};

namespace detail {

struct SpatialFactors {
    double weighted = 0.0; // I_4 or the critical psi factor
    double data = 0.0;     // int |Delta_H phi_2|^{q'}
    double r_scale = 0.0;  // R^{Q-2q'} or the log envelope
};

inline SpatialFactors spatial_factors(const Exponents& e, double R, const MCConfig& mc, bool& critical) {
    critical = e.is_critical();
    if (critical) {
        const CutoffSpec spec = CutoffSpec::logarithmic(e.kappa);
        const auto rep = spatial_integral_critical(e, spec, R, mc);
        return {rep.value.value, data_integral_critical(e, spec, R, mc).value, rep.envelope};
    }
    const CutoffSpec spec = CutoffSpec::default_power(e.q);
    return {spatial_integral_subcritical(e, spec, R, mc).value, data_integral_subcritical(e, spec, R, mc).value,
            std::pow(R, e.Q() - 2.0 * e.q_prime())};
}

inline CapacityReport finish(CapacityReport rep) {
    rep.bound = 0.0;
    for (const auto& t : rep.terms) rep.bound += t.value;
    rep.measured_constant = rep.reference_form > 0.0 ? rep.bound / rep.reference_form : 0.0;
    return rep;
}

} // namespace detail

/// Bound for the first-order-in-time problem:
///   2C(q) (I_2 + I_1) * S(R) + 2 ||u_0||_q (int |Delta_H phi_2|^{q'})^{1/q'}.
/// S(R) is I_4 on the subcritical and supercritical paths and the psi factor at
/// the critical exponent.
inline CapacityReport capacity_bound_parabolic(const Exponents& e, double T, double R, double u0_norm,
                                               const MCConfig& mc) {
    e.validate();
    if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
    if (!(u0_norm >= 0.0)) throw ParameterError("data norm must be nonnegative");
    CapacityReport rep;
    const auto s = detail::spatial_factors(e, R, mc, rep.critical_path);
    const double C = young_constant(e.q);
    const double i1 = time_integral(e, T, 0).value;
    const double i2 = time_integral(e, T, 1).value;
    rep.terms = {{"young_dt", 2.0 * C * i2 * s.weighted},
                 {"young_value", 2.0 * C * i1 * s.weighted},
                 {"data_u0", 2.0 * u0_norm * std::pow(s.data, 1.0 / e.q_prime())}};
    rep.parameters = {{"n", static_cast<double>(e.n)}, {"q", e.q},   {"ell", e.ell}, {"kappa", e.kappa},
                      {"T", T},                        {"R", R},     {"u0_norm", u0_norm}};
    rep.reference_form = s.r_scale * (std::pow(T, time_integral_exponent(e, 1)) + T + 1.0);
    return detail::finish(std::move(rep));
}

/// Bound for the second-order-in-time problem:
///   2C(q) (I_3 + I_1) * S(R) + 2 (||u_1||_q + (ell/T) ||u_0||_q) (int |Delta_H phi_2|^{q'})^{1/q'}.
/// reference_form is R^{Q-2q'} (T^{1-2q'} + T + 1 + T^{-1}), or the log
/// envelope times (T^{1-Q} + T + 1 + T^{-1}) at the critical exponent.
inline CapacityReport capacity_bound_hyperbolic(const Exponents& e, double T, double R, double u0_norm,
                                                double u1_norm, const MCConfig& mc) {
    e.validate();
    if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
    if (!(u0_norm >= 0.0) || !(u1_norm >= 0.0)) throw ParameterError("data norms must be nonnegative");
    CapacityReport rep;
    const auto s = detail::spatial_factors(e, R, mc, rep.critical_path);
    const double C = young_constant(e.q);
    const double i1 = time_integral(e, T, 0).value;
    const double i3 = time_integral(e, T, 2).value;
    const double data = std::pow(s.data, 1.0 / e.q_prime());
    rep.terms = {{"young_dtt", 2.0 * C * i3 * s.weighted},
                 {"young_value", 2.0 * C * i1 * s.weighted},
                 {"data_u1", 2.0 * u1_norm * data},
                 {"data_u0", 2.0 * (e.ell / T) * u0_norm * data}};
    rep.parameters = {{"n", static_cast<double>(e.n)}, {"q", e.q}, {"ell", e.ell},       {"kappa", e.kappa},
                      {"T", T}, {"R", R}, {"u0_norm", u0_norm}, {"u1_norm", u1_norm}};
    rep.reference_form = s.r_scale * (std::pow(T, time_integral_exponent(e, 2)) + T + 1.0 + 1.0 / T);
    return detail::finish(std::move(rep));
}

} // namespace heis

#endif
