#ifndef HEISLAB_FD_GRID_HPP
#define HEISLAB_FD_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/group.hpp"

namespace heis::fd {

/// Cell-centered box grid on [-L, L] per axis for n = 1, axis order (x, y, tau).
/// Node i sits at -L + (i + 1/2) h with h = 2L/N. The first and last layer on
/// each axis carry the zero Dirichlet values; the unknowns are the interior
/// nodes, (N_x - 2)(N_y - 2)(N_tau - 2) of them.
struct Grid {
    std::array<double, 3> half_width{1.0, 1.0, 1.0};
    std::array<int, 3> nodes{17, 17, 17};

    static Grid make(std::array<double, 3> half_width, std::array<int, 3> nodes) {
        for (int a = 0; a < 3; ++a) {
            if (!(half_width[a] > 0.0) || !std::isfinite(half_width[a]))
                throw ParameterError("grid half-widths must be positive and finite");
            if (nodes[a] < 3) throw ParameterError("grid needs at least 3 nodes per axis");
        }
        return {half_width, nodes};
    }

    [[nodiscard]] double spacing(int axis) const { return 2.0 * half_width[axis] / nodes[axis]; }
    [[nodiscard]] double coordinate(int axis, int i) const {
        return -half_width[axis] + (i + 0.5) * spacing(axis);
    }
    [[nodiscard]] double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

    [[nodiscard]] int interior(int axis) const { return nodes[axis] - 2; }
    [[nodiscard]] std::size_t unknowns() const {
        return static_cast<std::size_t>(interior(0)) * interior(1) * interior(2);
    }

    /// Flat interior index of full-grid node (i, j, k), or -1 on the boundary layer.
    [[nodiscard]] long index(int i, int j, int k) const {
        if (i < 1 || j < 1 || k < 1 || i > nodes[0] - 2 || j > nodes[1] - 2 || k > nodes[2] - 2) return -1;
        return (static_cast<long>(i - 1) * interior(1) + (j - 1)) * interior(2) + (k - 1);
    }

    /// Full-grid node of interior index u.
    [[nodiscard]] std::array<int, 3> node(std::size_t u) const {
        const auto nk = static_cast<std::size_t>(interior(2)), nj = static_cast<std::size_t>(interior(1));
        return {static_cast<int>(u / (nj * nk)) + 1, static_cast<int>((u / nk) % nj) + 1, static_cast<int>(u % nk) + 1};
    }

    [[nodiscard]] GroupPoint point(std::size_t u) const {
        const auto c = node(u);
        return {{coordinate(0, c[0])}, {coordinate(1, c[1])}, coordinate(2, c[2])};
    }

    /// Volume of the interior cells, the domain the grid norms integrate over.
    [[nodiscard]] double interior_volume() const { return static_cast<double>(unknowns()) * cell_volume(); }
};

/// Values over the interior nodes of a grid.
struct GridField {
    Grid grid;
    std::vector<double> values;

    static GridField zeros(const Grid& g) { return {g, std::vector<double>(g.unknowns(), 0.0)}; }
    static GridField sample(const Grid& g, const std::function<double(const GroupPoint&)>& f) {
        GridField out = zeros(g);
        for (std::size_t u = 0; u < out.values.size(); ++u) out.values[u] = f(g.point(u));
        return out;
    }
};

inline double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// (sum |v|^q h_x h_y h_tau)^{1/q} over the interior nodes.
inline double lq_norm(const GridField& f, double q) {
    if (!(q >= 1.0)) throw ParameterError("norm exponent must be at least 1");
    double s = 0.0;
    for (double x : f.values) s += std::pow(std::abs(x), q);
    return std::pow(s * f.grid.cell_volume(), 1.0 / q);
}

} // namespace heis::fd

#endif
