#include "rootb/rfbsde.hpp"

#include "rootb/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rootb {

namespace {

// least squares fit of y on powers of x up to `degree` via normal equations;
// x is standardized by the caller. Returns fitted values.
std::vector<double> polyfit_values(const std::vector<double>& x, const std::vector<double>& y,
                                   int degree) {
    const std::size_t n = x.size();
    const int p = degree + 1;
    auto idx = [p](int i, int j) { return static_cast<std::size_t>(i) * p + j; };
    std::vector<double> A(static_cast<std::size_t>(p) * p, 0.0), b(p, 0.0);
    std::vector<double> phi(p);
    for (std::size_t i = 0; i < n; ++i) {
        phi[0] = 1.0;
        for (int j = 1; j < p; ++j) phi[j] = phi[j - 1] * x[i];
        for (int j = 0; j < p; ++j) {
            b[j] += phi[j] * y[i];
            for (int l = j; l < p; ++l) A[idx(j, l)] += phi[j] * phi[l];
        }
    }
    for (int j = 0; j < p; ++j)
        for (int l = 0; l < j; ++l) A[idx(j, l)] = A[idx(l, j)];

    // Cholesky A = L L^T
    std::vector<double> L(static_cast<std::size_t>(p) * p, 0.0);
    for (int j = 0; j < p; ++j) {
        double d = A[idx(j, j)];
        for (int l = 0; l < j; ++l) d -= L[idx(j, l)] * L[idx(j, l)];
        if (!(d > 1e-13 * (1.0 + std::abs(A[idx(j, j)])))) throw RegressionSingular();
        L[idx(j, j)] = std::sqrt(d);
        for (int i = j + 1; i < p; ++i) {
            double s = A[idx(i, j)];
            for (int l = 0; l < j; ++l) s -= L[idx(i, l)] * L[idx(j, l)];
            L[idx(i, j)] = s / L[idx(j, j)];
        }
    }
    std::vector<double> z(p), beta(p);
    for (int i = 0; i < p; ++i) {
        double s = b[i];
        for (int l = 0; l < i; ++l) s -= L[idx(i, l)] * z[l];
        z[i] = s / L[idx(i, i)];
    }
    for (int i = p - 1; i >= 0; --i) {
        double s = z[i];
        for (int l = i + 1; l < p; ++l) s -= L[idx(l, i)] * beta[l];
        beta[i] = s / L[idx(i, i)];
    }

    std::vector<double> fit(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = beta[p - 1];
        for (int j = p - 2; j >= 0; --j) v = v * x[i] + beta[j];
        fit[i] = v;
    }
    return fit;
}

} // namespace

SnellResult snell_envelope(const Sigma& sigma, const std::function<double(double)>& u0,
                           const std::function<double(double)>& h, const RfbsdeConfig& cfg,
                           std::span<const std::pair<double, double>> query_points) {
    cfg.validate();
    SnellResult out;
    out.y.reserve(query_points.size());
    out.y_se.reserve(query_points.size());
    double residual_sum = 0.0;
    std::int64_t residual_terms = 0;

    const std::int64_t n = cfg.n_paths;
    for (std::size_t q = 0; q < query_points.size(); ++q) {
        const double t_query = query_points[q].first;
        const double x_query = query_points[q].second;
        if (t_query < 0.0 || t_query > cfg.T + 1e-12)
            throw ConfigError("query time outside [0, T]");
        if (h(x_query) > u0(x_query) + 1e-12)
            throw ConfigError("snell_envelope needs h <= u0");

        // the value at (t, x) is Y at s0 = T - t of the reversed problem
        const double span = t_query;
        if (span < cfg.T / cfg.n_steps * 0.5) {
            out.y.push_back(u0(x_query));
            out.y_se.push_back(0.0);
            continue;
        }
        const int n_sub = std::max(2, static_cast<int>(std::lround(cfg.n_steps * span / cfg.T)));
        const double dt = span / n_sub;
        const double sqrt_dt = std::sqrt(dt);
        const double s0 = cfg.T - t_query;

        // forward cloud under the time-reversed coefficient
        std::vector<std::vector<double>> xs(static_cast<std::size_t>(n_sub) + 1,
                                            std::vector<double>(n));
        for (std::int64_t p = 0; p < n; ++p) {
            PathRng rng(cfg.seed, q * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(p));
            double x = x_query;
            xs[0][p] = x;
            for (int k = 0; k < n_sub; ++k) {
                const double s = s0 + k * dt;
                x += sigma(cfg.T - s, x) * sqrt_dt * rng.next_normal();
                xs[static_cast<std::size_t>(k) + 1][p] = x;
            }
        }

        // backward recursion with fitted continuation values
        std::vector<double> y(n), zstd(n);
        for (std::int64_t p = 0; p < n; ++p) y[p] = u0(xs[static_cast<std::size_t>(n_sub)][p]);
        double se_src = 0.0;
        {
            double mean = 0.0;
            for (double v : y) mean += v;
            mean /= static_cast<double>(n);
            for (double v : y) se_src += (v - mean) * (v - mean);
            se_src = std::sqrt(se_src / (static_cast<double>(n) * (n - 1)));
        }
        for (int k = n_sub - 1; k >= 1; --k) {
            const auto& xk = xs[static_cast<std::size_t>(k)];
            double mean = 0.0, var = 0.0;
            for (double v : xk) mean += v;
            mean /= static_cast<double>(n);
            for (double v : xk) var += (v - mean) * (v - mean);
            var /= static_cast<double>(n);
            const double sd = std::sqrt(var);

            std::vector<double> cont;
            if (sd < 1e-12) {
                double ym = 0.0;
                for (double v : y) ym += v;
                ym /= static_cast<double>(n);
                cont.assign(n, ym);
            } else {
                for (std::int64_t p = 0; p < n; ++p) zstd[p] = (xk[p] - mean) / sd;
                cont = polyfit_values(zstd, y, cfg.basis);
            }
            for (std::int64_t p = 0; p < n; ++p) {
                const double hx = h(xk[p]);
                const double push = std::max(hx - cont[p], 0.0); // dK increment
                const double ynew = std::max(hx, cont[p]);
                residual_sum += (ynew - hx) * push;
                y[p] = ynew;
            }
            residual_terms += n;
        }
        // all paths share the query point at s0: plain mean is the continuation
        double c0 = 0.0;
        for (double v : y) c0 += v;
        c0 /= static_cast<double>(n);
        out.y.push_back(std::max(h(x_query), c0));
        out.y_se.push_back(se_src);
    }
    out.skorokhod_residual =
        residual_terms > 0 ? residual_sum / static_cast<double>(query_points.size()) : 0.0;
    return out;
}

double skorokhod_condition_check(const SnellResult& result) { return result.skorokhod_residual; }

} // namespace rootb
