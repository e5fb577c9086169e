#ifndef HEISLAB_VERDICT_HPP
#define HEISLAB_VERDICT_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "heislab/errors.hpp"

namespace heis {

/// Exact rational p/d with d > 0, reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t p, std::int64_t d) {
        if (d == 0) throw ParameterError("zero denominator");
        if (d < 0) {
            p = -p;
            d = -d;
        }
        const std::int64_t g = std::gcd(p, d);
        return {p / (g ? g : 1), d / (g ? g : 1)};
    }

    /// Parses "p/d", an integer, or a terminating decimal such as "1.5".
    static Rational parse(std::string_view s) {
        auto to_int = [](std::string_view t) {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
                throw ParameterError("not a rational number: '" + std::string(t) + "'");
            return v;
        };
        if (const auto slash = s.find('/'); slash != std::string_view::npos)
            return make(to_int(s.substr(0, slash)), to_int(s.substr(slash + 1)));
        if (const auto dot = s.find('.'); dot != std::string_view::npos) {
            const std::string_view frac = s.substr(dot + 1);
            if (frac.size() > 17) throw ParameterError("too many decimal digits: '" + std::string(s) + "'");
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const std::string_view whole = s.substr(0, dot);
            const bool negative = !whole.empty() && whole.front() == '-';
            const std::int64_t w = (whole.empty() || whole == "-" || whole == "+")
                                       ? 0
                                       : to_int(whole.front() == '+' ? whole.substr(1) : whole);
            const std::int64_t f = frac.empty() ? 0 : to_int(frac);
            if (f < 0) throw ParameterError("not a rational number: '" + std::string(s) + "'");
            const std::int64_t mag = (w < 0 ? -w : w) * scale + f;
            return make(negative ? -mag : mag, scale);
        }
        return make(to_int(s), 1);
    }

    [[nodiscard]] double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Sign of a - b, computed exactly.
inline int compare(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num) * b.den;
    const __int128 r = static_cast<__int128>(b.num) * a.den;
    return (l > r) - (l < r);
}

enum class Verdict { SubcriticalBlowup, CriticalBlowup, SupercriticalNoConclusion };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::SubcriticalBlowup: return "SubcriticalBlowup";
    case Verdict::CriticalBlowup: return "CriticalBlowup";
    case Verdict::SupercriticalNoConclusion: return "SupercriticalNoConclusion";
    }
    return "?";
}

inline const char* describe(Verdict v) {
    switch (v) {
    case Verdict::SubcriticalBlowup: return "no nontrivial local weak solution (1 < q < q_c)";
    case Verdict::CriticalBlowup: return "no nontrivial local weak solution (q = q_c)";
    case Verdict::SupercriticalNoConclusion:
        return "no conclusion from capacity bounds; stationary supersolutions exist";
    }
    return "?";
}

/// q_c = Q/(Q-2) = (n+1)/n.
inline Rational critical_exponent(int n) {
    if (n < 1) throw ParameterError("n must be >= 1");
    return Rational::make(n + 1, n);
}

inline Verdict verdict(int n, const Rational& q) {
    if (compare(q, Rational{1, 1}) <= 0) throw ParameterError("q must exceed 1");
    const int c = compare(q, critical_exponent(n));
    if (c < 0) return Verdict::SubcriticalBlowup;
    if (c == 0) return Verdict::CriticalBlowup;
    return Verdict::SupercriticalNoConclusion;
}

/// Exact comparison of a binary double with (n+1)/n: q == (n+1)/n iff
/// q*n - (n+1) is exactly zero, which fma evaluates without intermediate
/// rounding.
inline Verdict verdict(int n, double q) {
    if (!std::isfinite(q) || !(q > 1.0)) throw ParameterError("q must exceed 1");
    if (n < 1) throw ParameterError("n must be >= 1");
    const double residual = std::fma(q, static_cast<double>(n), -static_cast<double>(n + 1));
    if (residual < 0.0) return Verdict::SubcriticalBlowup;
    if (residual == 0.0) return Verdict::CriticalBlowup;
    return Verdict::SupercriticalNoConclusion;
}

} // namespace heis

#endif
