#ifndef HEISLAB_CUTOFF_HPP
#define HEISLAB_CUTOFF_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "heislab/errors.hpp"

namespace heis {

/// Value and first two derivatives of a scalar profile at one abscissa.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Theta(s) = 1 - s^3 (10 - 15 s + 6 s^2) on [0, 1]: the complement of the
/// quintic smoothstep. Theta', Theta'' vanish at both ends, so any power of it
/// glued to the constants 1 and 0 is C^2.
inline Jet smoothstep_complement(double s) {
    if (s <= 0.0) return {1.0, 0.0, 0.0};
    if (s >= 1.0) return {0.0, 0.0, 0.0};
    const double u = 1.0 - s;
    return {1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s), -30.0 * s * s * u * u,
            -60.0 * s * u * (1.0 - 2.0 * s)};
}

enum class CutoffFamily {
    power,       // Phi(z) = Theta(2z - 1)^m, transition [1/2, 1]
    logarithmic  // Psi(z) = Theta(z), transition [0, 1]; kappa applied by the test function
};

/// Parameters of a C^2 cutoff family.
struct CutoffSpec {
    CutoffFamily family = CutoffFamily::power;
    int m = 2;          // smoothstep power for the power family
    double kappa = 5.0; // exponent applied to Psi by the logarithmic test function

    static CutoffSpec power(int m) {
        if (m < 1) throw ParameterError("smoothstep power m must be a positive integer");
        return {CutoffFamily::power, m, 0.0};
    }
    static CutoffSpec logarithmic(double kappa) {
        if (!(kappa > 2.0)) throw ParameterError("kappa must exceed 2");
        return {CutoffFamily::logarithmic, 1, kappa};
    }

    /// m = ceil((q+1)/(3(q-1))) + 1, the smallest comfortable power keeping
    /// Phi^{-1/(q-1)} |Delta_H Phi|^{q'} integrable.
    static CutoffSpec default_power(double q) {
        require_q(q);
        return power(static_cast<int>(std::ceil((q + 1.0) / (3.0 * (q - 1.0)))) + 1);
    }
    /// kappa = max(2q/(q-1), 2q) + 1.
    static CutoffSpec default_logarithmic(double q) {
        require_q(q);
        return logarithmic(std::max(2.0 * q / (q - 1.0), 2.0 * q) + 1.0);
    }

    /// Throws unless this spec satisfies its q-dependent admissibility bound.
    void validate_for(double q) const {
        require_q(q);
        if (family == CutoffFamily::power) {
            const double bound = (q + 1.0) / (3.0 * (q - 1.0));
            if (!(m > bound))
                throw ParameterError("m must exceed (q+1)/(3(q-1)) = " + std::to_string(bound));
        } else {
            const double bound = 2.0 * q / (q - 1.0);
            if (!(kappa > bound))
                throw ParameterError("kappa must exceed 2q/(q-1) = " + std::to_string(bound));
        }
    }

private:
    static void require_q(double q) {
        if (!(q > 1.0)) throw ParameterError("q must exceed 1");
    }
};

/// Cutoff value with derivatives in z. Equal to 1 left of the transition,
/// 0 right of it, nonincreasing. Breakpoints take the polynomial branch.
inline Jet cutoff_eval(const CutoffSpec& spec, double z) {
    if (spec.family == CutoffFamily::logarithmic) return smoothstep_complement(z);

    if (z <= 0.5) return {1.0, 0.0, 0.0};
    if (z >= 1.0) return {0.0, 0.0, 0.0};
    const Jet th = smoothstep_complement(2.0 * z - 1.0);
    const double m = spec.m;
    // chain rule with ds/dz = 2
    const double pm1 = std::pow(th.value, m - 1.0);
    const double pm2 = spec.m >= 2 ? std::pow(th.value, m - 2.0) : 0.0;
    return {pm1 * th.value, 2.0 * m * pm1 * th.d1,
            4.0 * (m * (m - 1.0) * pm2 * th.d1 * th.d1 + m * pm1 * th.d2)};
}

struct DerivativeBounds {
    double max_d1 = 0.0;
    double max_d2 = 0.0;
};

/// sup |c'| and sup |c''| over the transition, sampled on a uniform mesh.
inline DerivativeBounds cutoff_derivative_bounds(const CutoffSpec& spec, int cells = 20000) {
    const double a = spec.family == CutoffFamily::power ? 0.5 : 0.0;
    const double b = 1.0;
    DerivativeBounds out;
    for (int i = 0; i <= cells; ++i) {
        const Jet c = cutoff_eval(spec, a + (b - a) * i / cells);
        out.max_d1 = std::max(out.max_d1, std::abs(c.d1));
        out.max_d2 = std::max(out.max_d2, std::abs(c.d2));
    }
    return out;
}

/// Time factor (1 - t/T)^ell on [0, T].
struct TemporalFactor {
    double T = 1.0;
    double ell = 2.0;

    TemporalFactor(double horizon, double exponent) : T(horizon), ell(exponent) {
        if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
        if (!(ell > 0.0)) throw ParameterError("ell must be positive");
    }
};

/// k-th time derivative of (1 - t/T)^ell written in the normalized distance
/// to the horizon s = 1 - t/T, which keeps full precision as t -> T.
inline double temporal_eval_at_distance(const TemporalFactor& tf, double s, int order) {
    switch (order) {
    case 0: return std::pow(s, tf.ell);
    case 1: return -(tf.ell / tf.T) * std::pow(s, tf.ell - 1.0);
    case 2: return tf.ell * (tf.ell - 1.0) / (tf.T * tf.T) * std::pow(s, tf.ell - 2.0);
    default: throw ParameterError("time derivative order must be 0, 1 or 2");
    }
}

/// k-th time derivative of (1 - t/T)^ell, k in {0, 1, 2}.
inline double temporal_eval(const TemporalFactor& tf, double t, int order) {
    if (t < 0.0 || t > tf.T)
        throw DomainError("time " + std::to_string(t) + " outside [0, T]");
    return temporal_eval_at_distance(tf, 1.0 - t / tf.T, order);
}

} // namespace heis

#endif
