#ifndef HEISLAB_FD_SPARSE_HPP
#define HEISLAB_FD_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/fd/grid.hpp"

namespace heis::fd {

/// Square matrix in compressed row form, columns ascending within a row.
struct SparseOperator {
    std::size_t dim = 0;
    std::vector<std::size_t> row_start{0};
    std::vector<std::size_t> col;
    std::vector<double> val;
    bool symmetric = false;
    double regularization = 0.0;

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        if (x.size() != dim) throw DimensionError("vector length does not match the operator");
        y.assign(dim, 0.0);
        for (std::size_t r = 0; r < dim; ++r) {
            double s = 0.0;
            for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) s += val[k] * x[col[k]];
            y[r] = s;
        }
    }
    [[nodiscard]] std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y;
        apply(x, y);
        return y;
    }

    [[nodiscard]] double entry(std::size_t r, std::size_t c) const {
        const auto b = col.begin() + static_cast<std::ptrdiff_t>(row_start[r]);
        const auto e = col.begin() + static_cast<std::ptrdiff_t>(row_start[r + 1]);
        const auto it = std::lower_bound(b, e, c);
        return it != e && *it == c ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
    }

    [[nodiscard]] std::vector<double> diagonal() const {
        std::vector<double> d(dim);
        for (std::size_t r = 0; r < dim; ++r) d[r] = entry(r, r);
        return d;
    }

    /// max |A_rc - A_cr| over stored entries.
    [[nodiscard]] double asymmetry() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k)
                worst = std::max(worst, std::abs(val[k] - entry(col[k], r)));
        return worst;
    }

    [[nodiscard]] std::size_t nonzeros() const { return val.size(); }
};

namespace detail {

struct Triplet {
    std::size_t r, c;
    double v;
};

/// Sparse row of a difference operator: interior index and coefficient.
using DiffRow = std::vector<std::pair<long, double>>;

inline void add_row(DiffRow& row, long idx, double coef) {
    if (idx >= 0 && coef != 0.0) row.emplace_back(idx, coef);
}

/// Accumulates -D^T D for each row of D. Entries (j, k) and (k, j) receive the
/// same products in the same order, so the result is exactly symmetric.
inline void accumulate_normal(const DiffRow& row, double weight, std::vector<Triplet>& out) {
    for (const auto& [j, a] : row)
        for (const auto& [k, b] : row)
            out.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k), -weight * (a * b)});
}

inline SparseOperator compress(std::size_t dim, std::vector<Triplet>& t) {
    std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    SparseOperator op;
    op.dim = dim;
    op.row_start.assign(dim + 1, 0);
    for (std::size_t i = 0; i < t.size();) {
        std::size_t j = i;
        double s = 0.0;
        while (j < t.size() && t[j].r == t[i].r && t[j].c == t[i].c) s += t[j++].v;
        op.col.push_back(t[i].c);
        op.val.push_back(s);
        ++op.row_start[t[i].r + 1];
        i = j;
    }
    for (std::size_t r = 0; r < dim; ++r) op.row_start[r + 1] += op.row_start[r];
    op.symmetric = true;
    return op;
}

} // namespace detail

/// L_h = -sum (D_X^T D_X + D_Y^T D_Y) with forward differences of
/// X = d_x + 2y d_tau and Y = d_y - 2x d_tau, coefficients sampled at the row
/// node, zero Dirichlet closure. With epsilon > 0 the term -epsilon D_tau^T D_tau
/// is added.
inline SparseOperator assemble_sublaplacian(const Grid& g, double epsilon = 0.0) {
    if (!(epsilon >= 0.0)) throw ParameterError("regularization epsilon must be nonnegative");
    const double hx = g.spacing(0), hy = g.spacing(1), ht = g.spacing(2);
    std::vector<detail::Triplet> t;
    t.reserve(g.unknowns() * 40);
    detail::DiffRow row;
    for (int i = 0; i + 1 < g.nodes[0]; ++i) {
        for (int j = 0; j + 1 < g.nodes[1]; ++j) {
            for (int k = 0; k + 1 < g.nodes[2]; ++k) {
                const double x = g.coordinate(0, i), y = g.coordinate(1, j);
                const long c = g.index(i, j, k), up = g.index(i, j, k + 1);
                // D_X
                row.clear();
                detail::add_row(row, g.index(i + 1, j, k), 1.0 / hx);
                detail::add_row(row, up, 2.0 * y / ht);
                detail::add_row(row, c, -1.0 / hx - 2.0 * y / ht);
                detail::accumulate_normal(row, 1.0, t);
                // D_Y
                row.clear();
                detail::add_row(row, g.index(i, j + 1, k), 1.0 / hy);
                detail::add_row(row, up, -2.0 * x / ht);
                detail::add_row(row, c, -1.0 / hy + 2.0 * x / ht);
                detail::accumulate_normal(row, 1.0, t);
                if (epsilon > 0.0) {
                    row.clear();
                    detail::add_row(row, up, 1.0 / ht);
                    detail::add_row(row, c, -1.0 / ht);
                    detail::accumulate_normal(row, epsilon, t);
                }
            }
        }
    }
    SparseOperator op = detail::compress(g.unknowns(), t);
    op.regularization = epsilon;
    return op;
}

} // namespace heis::fd

#endif
