#pragma once

#include "rootb/grid.hpp"
#include "rootb/measures.hpp"
#include "rootb/sigma.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rootb {

enum class PdeKind { Obstacle, Penalized, Heat, Rost };

/// Dense time-space solution of one of the explicit schemes. Row n holds the
/// values at time n*dt over the n_x+2 columns (boundary columns included).
struct PdeSolution {
    Grid grid;
    PdeKind kind = PdeKind::Obstacle;
    std::string sigma_id;
    double penalty_weight = 0.0;
    std::vector<double> values; // (n_t+1) x (n_x+2), row-major

    double at(int n, int j) const { return values[static_cast<std::size_t>(n) * (grid.n_x + 2) + j]; }
    std::span<const double> row(int n) const {
        return {values.data() + static_cast<std::size_t>(n) * (grid.n_x + 2),
                static_cast<std::size_t>(grid.n_x + 2)};
    }
};

/// min(u - u_nu, du/dt - sigma^2/2 Lap u) = 0 with u(0,.) = u_mu, Dirichlet
/// boundary pinned to u_mu. Requires mu <=_cx nu and the CFL bound
/// dt sigma^2 <= dx^2 at every evaluated stencil point.
PdeSolution solve_obstacle(const Sigma& sigma, const ProbabilityMeasure& mu,
                           const ProbabilityMeasure& nu, const Grid& grid);

/// du/dt = sigma^2/2 Lap u + n (u - h)^-; h is an arbitrary obstacle function.
PdeSolution solve_penalized(const Sigma& sigma, const ProbabilityMeasure& mu,
                            const std::function<double(double)>& h, const Grid& grid,
                            double penalty_n);

/// Plain heat flow of u_mu (the penalized scheme with n = 0).
PdeSolution solve_heat(const Sigma& sigma, const ProbabilityMeasure& mu, const Grid& grid);

/// Rost form: du/dt = min(0, sigma^2/2 Lap u), u(0,.) = u_mu - u_nu.
PdeSolution solve_rost(const Sigma& sigma, const ProbabilityMeasure& mu,
                       const ProbabilityMeasure& nu, const Grid& grid);

/// Memory-light obstacle solve for long runs: keeps two rows and records per
/// column the first time the gap u - u_nu drops to tol (linearly interpolated
/// between the bracketing steps; 2T where never reached within [0,T]).
struct StreamingObstacleResult {
    Grid grid;
    std::vector<double> final_row;
    std::vector<double> contact_time;
};
StreamingObstacleResult solve_obstacle_streaming(const Sigma& sigma, const ProbabilityMeasure& mu,
                                                 const ProbabilityMeasure& nu, const Grid& grid,
                                                 double tol);

/// Scheme core on raw rows; exposed so invariant tests can perturb the
/// initial data and obstacle directly. Obstacle may be empty for Heat/Rost;
/// boundary columns of `initial` are held fixed for all times.
PdeSolution run_explicit_scheme(PdeKind kind, const Sigma& sigma, std::span<const double> initial,
                                std::span<const double> obstacle, const Grid& grid,
                                double penalty_n);

} // namespace rootb
