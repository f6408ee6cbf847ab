#pragma once

#include "rootb/errors.hpp"
#include "rootb/sigma.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rootb {

/// Regression Monte Carlo configuration for the zero-driver reflected
/// backward SDE (a Snell envelope). n_steps counts time steps over the full
/// horizon [0,T]; per-query clouds use a proportional share.
struct RfbsdeConfig {
    double T = 1.0;
    int n_steps = 50;
    std::int64_t n_paths = 10000;
    int basis = 4; // polynomial regression degree
    std::uint64_t seed = 1;

    void validate() const {
        if (!(T > 0.0)) throw ConfigError("T must be > 0");
        if (n_steps < 2) throw ConfigError("n_steps must be >= 2");
        if (n_paths < 8) throw ConfigError("n_paths must be >= 8");
        if (basis < 1) throw ConfigError("basis degree must be >= 1");
    }
};

struct SnellResult {
    std::vector<double> y;       // value per query point
    std::vector<double> y_se;    // crude standard error per query point
    double skorokhod_residual = 0.0;
};

/// Estimates the obstacle-problem value u(t,x) at each query point through
/// its stochastic representation: a forward cloud driven by the
/// time-reversed coefficient followed by the backward recursion
/// Y_s = max(h(X_s), E[Y_{s+dt} | X_s]) with the conditional expectation
/// fitted by polynomial regression. u0 is the terminal payoff after time
/// reversal (the PDE's initial data) and h the obstacle; requires h <= u0.
SnellResult snell_envelope(const Sigma& sigma, const std::function<double(double)>& u0,
                           const std::function<double(double)>& h, const RfbsdeConfig& cfg,
                           std::span<const std::pair<double, double>> query_points);

/// Monte Carlo estimate of sum (Y - h) dK accumulated during the run; the
/// discrete reflection keeps the product zero step by step, so any
/// measurable value signals an implementation defect.
double skorokhod_condition_check(const SnellResult& result);

} // namespace rootb
