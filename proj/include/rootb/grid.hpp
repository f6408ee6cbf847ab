#pragma once

#include "rootb/errors.hpp"

#include <cmath>
#include <vector>

namespace rootb {

/// Uniform time-space mesh for the explicit schemes. n_x counts interior
/// points; columns 0 and n_x+1 are the Dirichlet boundary.
struct Grid {
    double a = -1.0, b = 1.0;
    int n_x = 100;
    double T = 1.0;
    int n_t = 1000;

    double dx() const { return (b - a) / (n_x + 1); }
    double dt() const { return T / n_t; }

    std::vector<double> xs() const {
        // exact at the endpoints and at the center of symmetric domains
        std::vector<double> v(n_x + 2);
        for (int j = 0; j <= n_x + 1; ++j)
            v[j] = a + (b - a) * (static_cast<double>(j) / (n_x + 1));
        v[n_x + 1] = b;
        return v;
    }

    void validate() const {
        if (!(a < b)) throw ConfigError("grid needs a < b");
        if (n_x < 3) throw ConfigError("grid needs n_x >= 3");
        if (n_t < 1) throw ConfigError("grid needs n_t >= 1");
        if (!(T > 0.0)) throw ConfigError("grid needs T > 0");
    }

    static Grid with_steps(double a, double b, int n_x, double T, int n_t) {
        Grid g{a, b, n_x, T, n_t};
        g.validate();
        return g;
    }

    /// Derive the spatial resolution from a CFL ratio dt*sigma_sq_max/dx^2.
    /// n_x is rounded down to odd so symmetric domains keep a center column.
    static Grid from_time_steps(double a, double b, double T, int n_t, double cfl_ratio,
                                double sigma_sq_max) {
        if (!(cfl_ratio > 0.0 && cfl_ratio <= 1.0)) throw ConfigError("cfl_ratio must be in (0,1]");
        const double dt = T / n_t;
        const double dx = std::sqrt(dt * sigma_sq_max / cfl_ratio);
        int n_x = std::max(3, static_cast<int>(std::floor((b - a) / dx)) - 1);
        if (n_x % 2 == 0) --n_x;
        return with_steps(a, b, n_x, T, n_t);
    }

    /// Derive the time resolution from a CFL ratio.
    static Grid from_spatial(double a, double b, int n_x, double T, double cfl_ratio,
                             double sigma_sq_max) {
        if (!(cfl_ratio > 0.0 && cfl_ratio <= 1.0)) throw ConfigError("cfl_ratio must be in (0,1]");
        Grid g{a, b, n_x, T, 1};
        const double dt_max = cfl_ratio * g.dx() * g.dx() / sigma_sq_max;
        g.n_t = std::max(1, static_cast<int>(std::ceil(T / dt_max)));
        g.validate();
        return g;
    }
};

} // namespace rootb
