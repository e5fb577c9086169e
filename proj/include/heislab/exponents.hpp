#ifndef HEISLAB_EXPONENTS_HPP
#define HEISLAB_EXPONENTS_HPP

#include <cmath>
#include <optional>
#include <string>

#include "heislab/cutoff.hpp"
#include "heislab/errors.hpp"

namespace heis {

/// Exponent set of the capacity estimates for given (n, q).
struct Exponents {
    int n = 1;
    double q = 2.0;
    double ell = 4.0;
    double kappa = 5.0;

    [[nodiscard]] int Q() const noexcept { return 2 * n + 2; }
    [[nodiscard]] double q_prime() const noexcept { return q / (q - 1.0); }
    [[nodiscard]] double critical_q() const noexcept { return static_cast<double>(Q()) / (Q() - 2.0); }
    [[nodiscard]] bool is_critical(double tol = 1e-12) const noexcept {
        return std::abs(q - critical_q()) <= tol;
    }

    /// Smallest admissible ell and kappa are open bounds; defaults add 1.
    static double ell_bound(double q) { return (q + 1.0) / (q - 1.0); }
    static double kappa_bound(double q) { return 2.0 * q / (q - 1.0); }

    /// Builds an exponent set, filling ell and kappa from q when absent,
    /// and validates every constraint.
    static Exponents make(int n, double q, std::optional<double> ell = {},
                          std::optional<double> kappa = {}) {
        if (!(q > 1.0)) throw ParameterError("q must exceed 1");
        Exponents e{n, q, ell.value_or(ell_bound(q) + 1.0),
                    kappa.value_or(CutoffSpec::default_logarithmic(q).kappa)};
        e.validate();
        return e;
    }

    void validate() const {
        if (n < 1) throw ParameterError("n must be >= 1");
        if (!(q > 1.0)) throw ParameterError("q must exceed 1");
        if (!(ell > ell_bound(q)))
            throw ParameterError("ell must exceed (q+1)/(q-1) = " + std::to_string(ell_bound(q)));
        if (!(kappa > kappa_bound(q)))
            throw ParameterError("kappa must exceed 2q/(q-1) = " + std::to_string(kappa_bound(q)));
    }
};

/// base^{-1/(q-1)} |value|^{q'} evaluated in the log domain so that tiny
/// cutoff values near the edge of the support neither overflow nor produce
/// inf * 0. A vanishing base contributes 0.
inline double weighted_power(double base, double value, double q) {
    if (!(base > 0.0) || value == 0.0) return 0.0;
    const double qp = q / (q - 1.0);
    return std::exp(-std::log(base) / (q - 1.0) + qp * std::log(std::abs(value)));
}

} // namespace heis

#endif
