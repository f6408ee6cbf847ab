#include "rootb/pricing.hpp"

#include "rootb/pde.hpp"
#include "rootb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace rootb {

namespace {

int resolve_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("ROOT_BARRIER_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

template <typename Fn>
void parallel_paths(std::int64_t n_paths, int threads, Fn&& body) {
    if (threads <= 1) {
        body(0, n_paths);
        return;
    }
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n_paths + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(n_paths, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

struct GbmRun {
    EmbeddingReport report;
    double qv_mean = 0.0, qv_se = 0.0;
};

// Geometric Brownian motion from S_0 = 1 stepped in log space, so the
// realized log-variance of a path is exactly its elapsed time; stops when
// (t, S_t) enters the barrier. Also accumulates the price-space quadratic
// variation sum (dS)^2 per path.
GbmRun run_gbm_embedding(const RootBarrier& barrier, const PricingMcParams& mc, double t_max) {
    const double dt = mc.dt;
    const double sqrt_dt = std::sqrt(dt);
    const std::int64_t max_steps = static_cast<std::int64_t>(std::ceil(t_max / dt));
    const std::int64_t n = mc.n_paths;

    constexpr double kUnstopped = -1.0;
    std::vector<double> taus(n, kUnstopped), xs(n, 0.0), qvs(n, 0.0);

    parallel_paths(n, resolve_threads(mc.threads), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            PathRng rng(mc.seed, static_cast<std::uint64_t>(p));
            double lx = 0.0; // ln S
            double s = 1.0;
            double qv = 0.0;
            double t = 0.0;
            if (t >= barrier.eval(s, mc.hit_rule)) {
                taus[p] = 0.0;
                xs[p] = s;
                continue;
            }
            for (std::int64_t k = 1; k <= max_steps; ++k) {
                const double z = rng.next_normal();
                lx += -0.5 * dt + sqrt_dt * z;
                const double s_new = std::exp(lx);
                qv += (s_new - s) * (s_new - s);
                s = s_new;
                t = static_cast<double>(k) * dt;
                if (t >= barrier.eval(s, mc.hit_rule)) {
                    taus[p] = t;
                    xs[p] = s;
                    qvs[p] = qv;
                    break;
                }
            }
        }
    });

    GbmRun out;
    out.report.n_paths = n;
    out.report.seed = mc.seed;
    double sum_t = 0.0, sum_t2 = 0.0, sum_qv = 0.0;
    for (std::int64_t p = 0; p < n; ++p) {
        if (taus[p] == kUnstopped) continue;
        out.report.tau_samples.push_back(taus[p]);
        out.report.x_samples.push_back(xs[p]);
        sum_t += taus[p];
        sum_t2 += taus[p] * taus[p];
        sum_qv += qvs[p];
    }
    const std::int64_t stopped = static_cast<std::int64_t>(out.report.tau_samples.size());
    out.report.unstopped_fraction = static_cast<double>(n - stopped) / static_cast<double>(n);
    if (stopped > 0) {
        out.report.mean_tau = sum_t / stopped;
        out.report.second_moment_tau = sum_t2 / stopped;
        out.qv_mean = sum_qv / stopped;
        double v = 0.0;
        std::int64_t i = 0;
        for (std::int64_t p = 0; p < n; ++p) {
            if (taus[p] == kUnstopped) continue;
            v += (qvs[p] - out.qv_mean) * (qvs[p] - out.qv_mean);
            ++i;
        }
        out.qv_se = stopped > 1 ? std::sqrt(v / (static_cast<double>(stopped) * (stopped - 1))) : 0.0;
    }
    return out;
}

} // namespace

VariancePayoff::VariancePayoff(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw ConfigError("payoff needs at least one affine piece");
    double at_zero = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
        if (p.slope < 0.0) throw ConfigError("payoff pieces must be nondecreasing");
        at_zero = std::max(at_zero, p.intercept);
    }
    if (std::abs(at_zero) > 1e-12) throw ConfigError("payoff must satisfy f(0) = 0");
}

VariancePayoff VariancePayoff::call(double strike) {
    if (strike < 0.0) throw ConfigError("variance call strike must be >= 0");
    return VariancePayoff({{0.0, 0.0}, {1.0, -strike}});
}

VariancePayoff VariancePayoff::identity() { return VariancePayoff({{1.0, 0.0}}); }

double VariancePayoff::operator()(double x) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) v = std::max(v, p.slope * x + p.intercept);
    return v;
}

void VarianceOptionSpec::validate() const {
    if (!(maturity > 0.0)) throw ConfigError("maturity must be > 0");
    if (!(epsilon > 0.0)) throw SupportViolation("support floor epsilon must be > 0");
    if (nu.is_atomic()) {
        if (nu.support_lo() < epsilon - 1e-12)
            throw SupportViolation("target has mass below epsilon");
    } else if (nu.kind() == MeasureKind::Gaussian) {
        throw SupportViolation("target support must lie in (0, infinity)");
    } else if (nu.support_lo() < 0.0) {
        throw SupportViolation("target support must lie in (0, infinity)");
    }
    if (std::abs(nu.mean() - 1.0) > 1e-9)
        throw ConfigError("target law must be forward-normalized to mean 1");
}

VarianceBound variance_bound_lower(const VarianceOptionSpec& spec, const PricingPdeParams& pde,
                                   const PricingMcParams& mc) {
    spec.validate();
    auto mu = ProbabilityMeasure::dirac(1.0);

    // price-space domain and obstacle PDE with sigma(x) = x
    const double a = 0.5 * spec.epsilon;
    const double b = 2.0 * spec.nu.quantile(0.9999);
    const Sigma sigma = Sigma::identity();
    auto grid = Grid::from_spatial(a, b, pde.n_x, pde.t_horizon, pde.cfl_ratio, sigma.sup_sq(a, b));
    {
        const auto order = convex_order_check(mu, spec.nu, grid.xs());
        if (!order.ordered) throw OrderViolation(*order.witness);
    }
    auto stream = solve_obstacle_streaming(sigma, mu, spec.nu, grid, pde.extract_tol);
    auto barrier = extract_barrier(stream);
    barrier = regularize(barrier, contact_set(mu, spec.nu, grid.xs()));

    PricingMcParams mcp = mc;
    const double t_max = mcp.t_max > 0.0 ? mcp.t_max : pde.t_horizon;
    auto run = run_gbm_embedding(barrier, mcp, t_max);

    VarianceBound out{0.0, 0.0, std::move(barrier), std::move(run.report), run.qv_mean, run.qv_se,
                      false};
    const auto& taus = out.report.tau_samples;
    if (!taus.empty()) {
        double s = 0.0;
        for (double t : taus) s += spec.payoff(t);
        out.bound = s / static_cast<double>(taus.size());
        double v = 0.0;
        for (double t : taus) {
            const double d = spec.payoff(t) - out.bound;
            v += d * d;
        }
        out.stderr_ = taus.size() > 1
                          ? std::sqrt(v / (static_cast<double>(taus.size()) * (taus.size() - 1)))
                          : 0.0;
    }
    // the GBM theorem's identity as printed: E[[X]_tau] = int x^2 mu(dx) = 1
    const double mu_second = 1.0;
    out.gbm_identity_discrepancy = std::abs(out.qv_mean - mu_second) > 3.0 * out.qv_se;
    return out;
}

SharpnessWitness sharpness_witness(const VarianceOptionSpec& spec, const RootBarrier& barrier,
                                   const PricingMcParams& mc) {
    spec.validate();
    const double t_max = mc.t_max > 0.0 ? mc.t_max : 2.0 * barrier.inf_sentinel();
    auto run = run_gbm_embedding(barrier, mc, t_max);
    SharpnessWitness out;
    std::vector<double> grid;
    const double glo = 0.5 * spec.epsilon, ghi = 2.0 * spec.nu.quantile(0.9999);
    for (int i = 0; i <= 200; ++i) grid.push_back(glo + (ghi - glo) * i / 200.0);
    out.embedding_distance = embedding_distance(run.report.x_samples, spec.nu, grid);
    const auto& taus = run.report.tau_samples;
    double s = 0.0;
    for (double t : taus) s += spec.payoff(t);
    out.mean_payoff = taus.empty() ? 0.0 : s / static_cast<double>(taus.size());
    double v = 0.0;
    for (double t : taus) {
        const double d = spec.payoff(t) - out.mean_payoff;
        v += d * d;
    }
    out.stderr_ = taus.size() > 1
                      ? std::sqrt(v / (static_cast<double>(taus.size()) * (taus.size() - 1)))
                      : 0.0;
    return out;
}

VarianceOptionSpec ingest_market(std::span<const double> strikes,
                                 std::span<const double> call_prices, double maturity,
                                 double forward, VariancePayoff payoff) {
    if (!(forward > 0.0)) throw ConfigError("forward must be > 0");
    auto raw = breeden_litzenberger(strikes, call_prices, forward);
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < raw.atom_positions().size(); ++i)
        atoms.emplace_back(raw.atom_positions()[i] / forward, raw.atom_masses()[i]);
    auto nu = ProbabilityMeasure::atomic(std::move(atoms));
    if (nu.support_lo() <= 0.0)
        throw SupportViolation("implied law puts mass at or below zero");
    VarianceOptionSpec spec;
    spec.payoff = std::move(payoff);
    spec.maturity = maturity;
    spec.epsilon = nu.support_lo();
    spec.nu = std::move(nu);
    return spec;
}

} // namespace rootb
