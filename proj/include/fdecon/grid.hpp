#pragma once

#include <stdexcept>
#include <vector>

namespace fdec {

/// Real values on the [0,1]x[0,1] grid t_i = i/n_time, x_l = l/n_space,
/// stored time-major (row i holds all profiles at time t_i).
struct Grid {
    int n_time = 0;
    int n_space = 0;
    std::vector<double> v;

    Grid() = default;
    Grid(int n, int m) : n_time(n), n_space(m), v(static_cast<std::size_t>(n) * m, 0.0) {}

    double& at(int i, int l) { return v[static_cast<std::size_t>(i) * n_space + l]; }
    double at(int i, int l) const { return v[static_cast<std::size_t>(i) * n_space + l]; }

    void require_same_shape(const Grid& other) const {
        if (n_time != other.n_time || n_space != other.n_space)
            throw std::invalid_argument("grid shape mismatch");
    }
};

}  // namespace fdec
