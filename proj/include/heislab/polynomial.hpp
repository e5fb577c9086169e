#ifndef HEISLAB_POLYNOMIAL_HPP
#define HEISLAB_POLYNOMIAL_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/field.hpp"

namespace heis {

/// Multivariate polynomial in the flat coordinates of H^n. Exposed as a
/// SmoothField with exact derivative oracles; used to exercise identities
/// that must hold to rounding.
class Polynomial {
public:
    struct Term {
        double coeff;
        std::vector<int> powers; // one exponent per flat coordinate
    };

    explicit Polynomial(int n) : dim_(static_cast<std::size_t>(2 * n + 1)) {
        if (n < 1) throw ParameterError("group dimension n must be >= 1");
    }

    Polynomial& add(double coeff, std::vector<int> powers) {
        if (powers.size() != dim_) throw DimensionError("monomial has wrong number of exponents");
        terms_.push_back({coeff, std::move(powers)});
        return *this;
    }

    /// Random polynomial with up to `terms` monomials of total degree <= max_degree.
    template <class Rng>
    static Polynomial random(int n, int terms, int max_degree, Rng& rng) {
        Polynomial p(n);
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        std::uniform_int_distribution<std::size_t> which(0, p.dim_ - 1);
        std::uniform_int_distribution<int> degree(0, max_degree);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> pw(p.dim_, 0);
            const int d = degree(rng);
            for (int k = 0; k < d; ++k) ++pw[which(rng)];
            p.add(coeff(rng), std::move(pw));
        }
        return p;
    }

    [[nodiscard]] double eval(const std::vector<double>& c) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.coeff * monomial(t.powers, c);
        return s;
    }

    [[nodiscard]] double derivative(const std::vector<double>& c, std::size_t i) const {
        double s = 0.0;
        for (const auto& t : terms_) {
            if (t.powers[i] == 0) continue;
            auto pw = t.powers;
            const double k = pw[i]--;
            s += t.coeff * k * monomial(pw, c);
        }
        return s;
    }

    [[nodiscard]] double derivative(const std::vector<double>& c, std::size_t i, std::size_t j) const {
        double s = 0.0;
        for (const auto& t : terms_) {
            auto pw = t.powers;
            if (pw[i] == 0) continue;
            double k = pw[i]--;
            if (pw[j] == 0) continue;
            k *= pw[j]--;
            s += t.coeff * k * monomial(pw, c);
        }
        return s;
    }

    [[nodiscard]] SmoothField field() const {
        auto self = std::make_shared<const Polynomial>(*this);
        return SmoothField::analytic(
            [self](const GroupPoint& p) { return self->eval(p.flat()); },
            [self](const GroupPoint& p, std::size_t i) { return self->derivative(p.flat(), i); },
            [self](const GroupPoint& p, std::size_t i, std::size_t j) {
                return self->derivative(p.flat(), i, j);
            });
    }

private:
    static double monomial(const std::vector<int>& pw, const std::vector<double>& c) {
        double v = 1.0;
        for (std::size_t k = 0; k < pw.size(); ++k)
            for (int e = 0; e < pw[k]; ++e) v *= c[k];
        return v;
    }

    std::size_t dim_;
    std::vector<Term> terms_;
};

} // namespace heis

#endif
