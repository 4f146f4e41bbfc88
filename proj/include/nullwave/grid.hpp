#ifndef NULLWAVE_GRID_HPP
#define NULLWAVE_GRID_HPP

#include <cmath>
#include <stdexcept>

namespace nullwave {

/// Uniform spatial grid x_j = x_min + j h, j = 0..m-1, with the time step
/// locked to h so grid diagonals are exact characteristics.
struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    int m = 0;

    Grid() = default;
    Grid(double x_min_, double x_max_, int m_) : x_min(x_min_), x_max(x_max_), m(m_) {
        if (!(m >= 3)) throw std::invalid_argument("Grid: need at least 3 points");
        if (!(x_max > x_min)) throw std::invalid_argument("Grid: empty domain");
    }

    double h() const { return (x_max - x_min) / (m - 1); }
    double x(int j) const { return std::fma(static_cast<double>(j), h(), x_min); }

    /// Null coordinates of the lattice point at step s, column j.  Computed
    /// from the integer diagonal ids so that points on the same diagonal get
    /// bit-identical weights.
    double u_at(long long s, int j) const {
        return 0.5 * (static_cast<double>(s - j) * h() - x_min);
    }
    double ubar_at(long long s, int j) const {
        return 0.5 * (static_cast<double>(s + j) * h() + x_min);
    }
};

} // namespace nullwave

#endif
