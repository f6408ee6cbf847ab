#include "rootb/pde.hpp"

#include "rootb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rootb {

namespace {

constexpr double kCflSlack = 1.0 + 1e-12;

// dt * sigma(t,x)^2 / dx^2 per column; throws when the scheme would lose
// monotonicity. extra_rate adds the penalty stiffness dt*n.
void fill_coeffs(const Sigma& sigma, const Grid& g, const std::vector<double>& xs, double t,
                 double extra_rate, std::vector<double>& c) {
    const double dt = g.dt(), dx2 = g.dx() * g.dx();
    const double scale = dt / (2.0 * dx2);
    for (int j = 1; j <= g.n_x; ++j) {
        const double s = sigma(t, xs[j]);
        const double ratio = dt * s * s / dx2 + extra_rate;
        if (ratio > kCflSlack) throw CflViolation(ratio);
        c[j] = s * s * scale;
    }
}

void check_order(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                 const std::vector<double>& xs) {
    const auto res = convex_order_check(mu, nu, xs);
    if (!res.ordered) throw OrderViolation(*res.witness);
}

} // namespace

PdeSolution run_explicit_scheme(PdeKind kind, const Sigma& sigma, std::span<const double> initial,
                                std::span<const double> obstacle, const Grid& grid,
                                double penalty_n) {
    grid.validate();
    const int W = grid.n_x + 2;
    if (static_cast<int>(initial.size()) != W) throw ConfigError("initial row size mismatch");
    const bool needs_obstacle = (kind == PdeKind::Obstacle || kind == PdeKind::Penalized);
    if (needs_obstacle && static_cast<int>(obstacle.size()) != W)
        throw ConfigError("obstacle row size mismatch");

    const auto& k = kern::active();
    const double dt = grid.dt();
    const double extra = (kind == PdeKind::Penalized) ? dt * penalty_n : 0.0;

    PdeSolution sol;
    sol.grid = grid;
    sol.kind = kind;
    sol.sigma_id = sigma.id();
    sol.penalty_weight = penalty_n;
    sol.values.assign(static_cast<std::size_t>(grid.n_t + 1) * W, 0.0);
    std::copy(initial.begin(), initial.end(), sol.values.begin());

    std::vector<double> c(W, 0.0);
    const auto xs = grid.xs();
    const bool refresh_c = sigma.time_dependent();
    fill_coeffs(sigma, grid, xs, 0.0, extra, c);

    for (int n = 0; n < grid.n_t; ++n) {
        const double* u = sol.values.data() + static_cast<std::size_t>(n) * W;
        double* out = sol.values.data() + static_cast<std::size_t>(n + 1) * W;
        if (refresh_c && n > 0) fill_coeffs(sigma, grid, xs, n * dt, extra, c);
        switch (kind) {
        case PdeKind::Obstacle:
            k.obstacle_step(u, c.data(), obstacle.data(), out, grid.n_x);
            break;
        case PdeKind::Penalized:
            k.penalty_step(u, c.data(), obstacle.data(), dt * penalty_n, out, grid.n_x);
            break;
        case PdeKind::Heat:
            k.heat_step(u, c.data(), out, grid.n_x);
            break;
        case PdeKind::Rost:
            k.rost_step(u, c.data(), out, grid.n_x);
            break;
        }
        out[0] = initial[0];
        out[W - 1] = initial[W - 1];
    }
    return sol;
}

PdeSolution solve_obstacle(const Sigma& sigma, const ProbabilityMeasure& mu,
                           const ProbabilityMeasure& nu, const Grid& grid) {
    const auto xs = grid.xs();
    check_order(mu, nu, xs);
    std::vector<double> u0(xs.size()), h(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        u0[j] = mu.potential(xs[j]);
        h[j] = nu.potential(xs[j]);
    }
    return run_explicit_scheme(PdeKind::Obstacle, sigma, u0, h, grid, 0.0);
}

PdeSolution solve_penalized(const Sigma& sigma, const ProbabilityMeasure& mu,
                            const std::function<double(double)>& h, const Grid& grid,
                            double penalty_n) {
    if (penalty_n < 0.0) throw ConfigError("penalty weight must be >= 0");
    const auto xs = grid.xs();
    std::vector<double> u0(xs.size()), hv(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        u0[j] = mu.potential(xs[j]);
        hv[j] = h(xs[j]);
    }
    return run_explicit_scheme(PdeKind::Penalized, sigma, u0, hv, grid, penalty_n);
}

PdeSolution solve_heat(const Sigma& sigma, const ProbabilityMeasure& mu, const Grid& grid) {
    const auto xs = grid.xs();
    std::vector<double> u0(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) u0[j] = mu.potential(xs[j]);
    auto sol = run_explicit_scheme(PdeKind::Heat, sigma, u0, {}, grid, 0.0);
    sol.kind = PdeKind::Heat;
    return sol;
}

PdeSolution solve_rost(const Sigma& sigma, const ProbabilityMeasure& mu,
                       const ProbabilityMeasure& nu, const Grid& grid) {
    const auto xs = grid.xs();
    check_order(mu, nu, xs);
    std::vector<double> u0(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) u0[j] = mu.potential(xs[j]) - nu.potential(xs[j]);
    return run_explicit_scheme(PdeKind::Rost, sigma, u0, {}, grid, 0.0);
}

StreamingObstacleResult solve_obstacle_streaming(const Sigma& sigma, const ProbabilityMeasure& mu,
                                                 const ProbabilityMeasure& nu, const Grid& grid,
                                                 double tol) {
    grid.validate();
    const auto xs = grid.xs();
    check_order(mu, nu, xs);
    const int W = grid.n_x + 2;
    const double dt = grid.dt();

    std::vector<double> u0(W), h(W);
    for (int j = 0; j < W; ++j) {
        u0[j] = mu.potential(xs[j]);
        h[j] = nu.potential(xs[j]);
    }

    const auto& k = kern::active();
    std::vector<double> cur = u0, nxt(W, 0.0), c(W, 0.0);
    const bool refresh_c = sigma.time_dependent();
    fill_coeffs(sigma, grid, xs, 0.0, 0.0, c);

    const double sentinel = 2.0 * grid.T;
    std::vector<double> contact(W, sentinel), prev_gap(W);
    int pending = 0;
    for (int j = 0; j < W; ++j) {
        prev_gap[j] = cur[j] - h[j];
        if (prev_gap[j] <= tol)
            contact[j] = 0.0;
        else
            ++pending;
    }

    for (int n = 0; n < grid.n_t; ++n) {
        if (refresh_c && n > 0) fill_coeffs(sigma, grid, xs, n * dt, 0.0, c);
        k.obstacle_step(cur.data(), c.data(), h.data(), nxt.data(), grid.n_x);
        nxt[0] = u0[0];
        nxt[W - 1] = u0[W - 1];
        if (pending > 0) {
            const double t1 = (n + 1) * dt;
            for (int j = 0; j < W; ++j) {
                if (contact[j] != sentinel) continue;
                const double gap = nxt[j] - h[j];
                if (gap <= tol) {
                    const double drop = prev_gap[j] - gap;
                    const double frac = drop > 0.0 ? std::clamp((prev_gap[j] - tol) / drop, 0.0, 1.0) : 1.0;
                    contact[j] = (t1 - dt) + frac * dt;
                    --pending;
                }
                prev_gap[j] = gap;
            }
        }
        std::swap(cur, nxt);
    }
    return {grid, std::move(cur), std::move(contact)};
}

} // namespace rootb
