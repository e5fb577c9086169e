#ifndef HEISLAB_FD_CG_HPP
#define HEISLAB_FD_CG_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/fd/sparse.hpp"

namespace heis::fd {

struct SolveResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

/// Solves (-op) x = rhs by conjugate gradients with Jacobi preconditioning,
/// stopping when ||rhs - (-op) x|| <= tol ||rhs||. max_iter = 0 means
/// 10 * dimension. A curvature p^T (-op) p <= 0 raises OperatorError;
/// running out of iterations raises SolverError.
inline SolveResult solve_linear(const SparseOperator& op, const std::vector<double>& rhs, double tol = 1e-10,
                                std::size_t max_iter = 0, const std::vector<double>* guess = nullptr) {
    const std::size_t n = op.dim;
    if (rhs.size() != n) throw DimensionError("right-hand side length does not match the operator");
    if (!(tol > 0.0)) throw ParameterError("solver tolerance must be positive");
    if (!op.symmetric) throw OperatorError("conjugate gradients need a symmetric operator");
    if (max_iter == 0) max_iter = 10 * n;

    std::vector<double> inv_diag = op.diagonal();
    for (double& d : inv_diag) {
        if (!(-d > 0.0)) throw OperatorError("operator diagonal is not negative; -op is not positive definite");
        d = 1.0 / -d;
    }

    SolveResult out;
    out.x = guess ? *guess : std::vector<double>(n, 0.0);
    if (out.x.size() != n) throw DimensionError("initial guess length does not match the operator");
    const double bnorm = std::sqrt(detail::dot(rhs, rhs));
    if (bnorm == 0.0) {
        out.x.assign(n, 0.0);
        return out;
    }

    std::vector<double> r(n), z(n), p(n), Ap(n);
    op.apply(out.x, Ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] + Ap[i];
    const double target = tol * bnorm;
    double rnorm = std::sqrt(detail::dot(r, r));
    if (rnorm <= target) {
        out.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] = inv_diag[i] * r[i];
    double rz = detail::dot(r, z);

    for (std::size_t it = 1; it <= max_iter; ++it) {
        op.apply(p, Ap);
        for (double& v : Ap) v = -v;
        const double curvature = detail::dot(p, Ap);
        if (!(curvature > 0.0))
            throw OperatorError("nonpositive curvature in conjugate gradients; -op is not positive definite");
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        rnorm = std::sqrt(detail::dot(r, r));
        out.iterations = it;
        if (rnorm <= target) {
            out.relative_residual = rnorm / bnorm;
            return out;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = detail::dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("conjugate gradients did not reach tolerance within " + std::to_string(max_iter) +
                      " iterations");
}

} // namespace heis::fd

#endif
