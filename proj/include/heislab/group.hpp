#ifndef HEISLAB_GROUP_HPP
#define HEISLAB_GROUP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "heislab/errors.hpp"

namespace heis {

/// Dimension data of H^n. The homogeneous dimension Q = 2n + 2 governs how
/// volumes scale under the group dilation.
struct GroupParams {
    int n = 1;

    explicit GroupParams(int n_) : n(n_) {
        if (n < 1) throw ParameterError("group dimension n must be >= 1");
    }

    [[nodiscard]] int Q() const noexcept { return 2 * n + 2; }
    [[nodiscard]] std::size_t coords() const noexcept { return static_cast<std::size_t>(2 * n + 1); }
};

/// A point (x, y, tau) of H^n.
///
/// Flat coordinate order used by every derivative oracle in the library:
/// index i in [0, n) is x_i, [n, 2n) is y_{i-n}, and 2n is tau.
class GroupPoint {
public:
    GroupPoint() : x_(1, 0.0), y_(1, 0.0) {}

    GroupPoint(std::vector<double> x, std::vector<double> y, double tau)
        : x_(std::move(x)), y_(std::move(y)), tau_(tau) {
        if (x_.size() != y_.size() || x_.empty())
            throw DimensionError("x and y must have the same positive length");
    }

    static GroupPoint origin(int n) {
        if (n < 1) throw ParameterError("group dimension n must be >= 1");
        return {std::vector<double>(static_cast<std::size_t>(n), 0.0),
                std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0};
    }

    /// Builds a point from flat coordinates (x_1..x_n, y_1..y_n, tau).
    static GroupPoint from_flat(const std::vector<double>& c) {
        if (c.size() < 3 || c.size() % 2 == 0)
            throw DimensionError("flat coordinates must have odd length 2n+1 >= 3");
        const std::size_t n = (c.size() - 1) / 2;
        return {std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)),
                std::vector<double>(c.begin() + static_cast<std::ptrdiff_t>(n),
                                    c.begin() + static_cast<std::ptrdiff_t>(2 * n)),
                c.back()};
    }

    [[nodiscard]] int n() const noexcept { return static_cast<int>(x_.size()); }
    [[nodiscard]] std::size_t coords() const noexcept { return 2 * x_.size() + 1; }

    [[nodiscard]] const std::vector<double>& x() const noexcept { return x_; }
    [[nodiscard]] const std::vector<double>& y() const noexcept { return y_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }

    [[nodiscard]] double coord(std::size_t i) const {
        const std::size_t n = x_.size();
        if (i < n) return x_[i];
        if (i < 2 * n) return y_[i - n];
        if (i == 2 * n) return tau_;
        throw DimensionError("coordinate index out of range");
    }

    void set_coord(std::size_t i, double v) {
        const std::size_t n = x_.size();
        if (i < n) x_[i] = v;
        else if (i < 2 * n) y_[i - n] = v;
        else if (i == 2 * n) tau_ = v;
        else throw DimensionError("coordinate index out of range");
    }

    [[nodiscard]] std::vector<double> flat() const {
        std::vector<double> c(x_);
        c.insert(c.end(), y_.begin(), y_.end());
        c.push_back(tau_);
        return c;
    }

    /// |x|^2 + |y|^2, the squared Euclidean norm of the horizontal part.
    [[nodiscard]] double horizontal_norm2() const noexcept {
        double s = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) s += x_[i] * x_[i] + y_[i] * y_[i];
        return s;
    }

    friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    double tau_ = 0.0;
};

inline void require_same_dimension(const GroupPoint& a, const GroupPoint& b) {
    if (a.n() != b.n())
        throw DimensionError("points live in H^" + std::to_string(a.n()) + " and H^" +
                             std::to_string(b.n()));
}

/// Group law: (x+x', y+y', tau+tau'+2(<x,y'> - <x',y>)).
inline GroupPoint compose(const GroupPoint& a, const GroupPoint& b) {
    require_same_dimension(a, b);
    const auto n = static_cast<std::size_t>(a.n());
    std::vector<double> x(n), y(n);
    double symplectic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a.x()[i] + b.x()[i];
        y[i] = a.y()[i] + b.y()[i];
        symplectic += a.x()[i] * b.y()[i] - b.x()[i] * a.y()[i];
    }
    return {std::move(x), std::move(y), a.tau() + b.tau() + 2.0 * symplectic};
}

inline GroupPoint inverse(const GroupPoint& a) {
    const auto n = static_cast<std::size_t>(a.n());
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -a.x()[i];
        y[i] = -a.y()[i];
    }
    return {std::move(x), std::move(y), -a.tau()};
}

/// Koranyi gauge ((|x|^2+|y|^2)^2 + tau^2)^{1/4}.
inline double gauge_norm(const GroupPoint& a) noexcept {
    const double s = a.horizontal_norm2();
    return std::sqrt(std::hypot(s, a.tau()));
}

/// delta_lambda(x, y, tau) = (lambda x, lambda y, lambda^2 tau).
inline GroupPoint dilate(double lambda, const GroupPoint& a) {
    if (!(lambda > 0.0)) throw ParameterError("dilation factor must be positive");
    const auto n = static_cast<std::size_t>(a.n());
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = lambda * a.x()[i];
        y[i] = lambda * a.y()[i];
    }
    return {std::move(x), std::move(y), lambda * lambda * a.tau()};
}

/// omega = (|x|^2+|y|^2) / |eta|_H^2, always in [0, 1].
/// Undefined at the origin; that is reported as a DomainError, not 0.
inline double anisotropy_weight(const GroupPoint& a) {
    const double s = a.horizontal_norm2();
    const double r2 = std::hypot(s, a.tau());
    if (!(r2 > 0.0)) throw DomainError("anisotropy weight is undefined at the origin");
    return std::min(1.0, s / r2);
}

} // namespace heis

#endif
