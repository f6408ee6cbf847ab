#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rootb/rfbsde.hpp"
#include "rootb/pde.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace rootb;

namespace {

ProbabilityMeasure spike_target() {
    return ProbabilityMeasure::atomic({{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}});
}

} // namespace

TEST_CASE("with the obstacle disabled the envelope matches the heat oracle") {
    RfbsdeConfig cfg;
    cfg.T = 1.0;
    cfg.n_steps = 40;
    cfg.n_paths = 20000;
    cfg.basis = 4;
    cfg.seed = 3;
    auto u0 = [](double x) { return -std::abs(x); };
    auto h = [](double) { return -1e6; };
    std::vector<std::pair<double, double>> queries{{1.0, 0.0}, {0.5, 0.3}, {0.8, -0.7}};
    auto res = snell_envelope(Sigma::constant(1.0), u0, h, cfg, queries);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double want = oracles::heat_dirac_potential(queries[i].first, queries[i].second);
        CHECK(std::abs(res.y[i] - want) <= 3.0 * res.y_se[i] + 5e-3);
    }
    CHECK(skorokhod_condition_check(res) == 0.0); // dK identically zero
}

TEST_CASE("u0 = h pins the envelope to the obstacle") {
    RfbsdeConfig cfg;
    cfg.T = 0.5;
    cfg.n_steps = 20;
    cfg.n_paths = 4000;
    cfg.seed = 4;
    auto nu = spike_target();
    auto f = [&](double x) { return nu.potential(x); };
    std::vector<std::pair<double, double>> queries{{0.5, 0.0}, {0.25, 0.4}, {0.1, -0.2}};
    auto res = snell_envelope(Sigma::constant(1.0), f, f, cfg, queries);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        // the fitted continuation smooths the piecewise-linear obstacle, so
        // the estimate sits on h up to the regression bias
        CHECK(res.y[i] >= f(queries[i].second) - 1e-12);
        CHECK(std::abs(res.y[i] - f(queries[i].second)) <= 3.0 * res.y_se[i] + 0.01);
    }
    CHECK(skorokhod_condition_check(res) == 0.0); // Y - h identically zero
}

TEST_CASE("envelope values stay above the obstacle") {
    RfbsdeConfig cfg;
    cfg.T = 2.0;
    cfg.n_steps = 30;
    cfg.n_paths = 3000;
    cfg.seed = 5;
    auto mu = ProbabilityMeasure::dirac(0.0);
    auto nu = spike_target();
    auto u0 = [&](double x) { return mu.potential(x); };
    auto h = [&](double x) { return nu.potential(x); };
    std::vector<std::pair<double, double>> queries;
    for (double t : {0.2, 0.6, 1.0, 1.6})
        for (double x : {-0.8, -0.3, 0.0, 0.4, 0.9}) queries.emplace_back(t, x);
    auto res = snell_envelope(Sigma::constant(1.0), u0, h, cfg, queries);
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(res.y[i] >= h(queries[i].second) - 1e-12);
}

TEST_CASE("raising the obstacle never lowers the envelope beyond noise") {
    RfbsdeConfig cfg;
    cfg.T = 1.0;
    cfg.n_steps = 25;
    cfg.n_paths = 8000;
    cfg.seed = 6;
    auto u0 = [](double x) { return -std::abs(x); };
    auto h1 = [](double x) { return -1.0 - 0.2 * std::abs(x); };
    auto h2 = [](double x) { return -0.8 - 0.2 * std::abs(x); };
    std::vector<std::pair<double, double>> queries{{1.0, 0.0}, {0.7, 0.5}, {0.4, -0.3}};
    auto r1 = snell_envelope(Sigma::constant(1.0), u0, h1, cfg, queries);
    auto r2 = snell_envelope(Sigma::constant(1.0), u0, h2, cfg, queries);
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(r2.y[i] >= r1.y[i] - 3.0 * (r1.y_se[i] + r2.y_se[i]) - 1e-9);
}

TEST_CASE("envelope agrees with the obstacle PDE on spike-example queries") {
    auto mu = ProbabilityMeasure::dirac(0.0);
    auto nu = spike_target();
    auto grid = Grid::from_spatial(-1.0, 1.0, 160, 2.0, 0.45, 1.0);
    auto sol = solve_obstacle(Sigma::constant(1.0), mu, nu, grid);

    RfbsdeConfig cfg;
    cfg.T = 2.0;
    cfg.n_steps = 64;
    cfg.n_paths = 10000;
    cfg.basis = 4;
    cfg.seed = 7;
    auto u0 = [&](double x) { return mu.potential(x); };
    auto h = [&](double x) { return nu.potential(x); };

    const auto xs = grid.xs();
    std::vector<std::pair<double, double>> queries;
    std::vector<double> pde_vals;
    for (int n : {grid.n_t / 5, grid.n_t / 2}) {
        for (int j = grid.n_x / 5; j < grid.n_x; j += 2 * grid.n_x / 5) {
            queries.emplace_back(n * grid.dt(), xs[j]);
            pde_vals.push_back(sol.at(n, j));
        }
    }
    auto res = snell_envelope(Sigma::constant(1.0), u0, h, cfg, queries);
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(std::abs(res.y[i] - pde_vals[i]) <= 0.02);
}

TEST_CASE("singular designs are reported") {
    RfbsdeConfig cfg;
    cfg.T = 1.0;
    cfg.n_steps = 4;
    cfg.n_paths = 8;
    cfg.basis = 10; // 11 coefficients from 8 points: rank deficient
    cfg.seed = 8;
    auto u0 = [](double x) { return -std::abs(x); };
    auto h = [](double) { return -1e6; };
    std::vector<std::pair<double, double>> queries{{1.0, 0.0}};
    CHECK_THROWS_AS((void)snell_envelope(Sigma::constant(1.0), u0, h, cfg, queries),
                    RegressionSingular);
}
