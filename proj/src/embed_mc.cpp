#include "rootb/embed_mc.hpp"

#include "rootb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
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

} // namespace

EmbeddingReport simulate_embedding(const SdeConfig& cfg, const RootBarrier& barrier) {
    cfg.validate();
    const std::int64_t n = cfg.n_paths;
    const double sqrt_dt = std::sqrt(cfg.dt);
    const std::int64_t max_steps = static_cast<std::int64_t>(std::ceil(cfg.t_max / cfg.dt));

    constexpr double kUnstopped = -1.0;
    std::vector<double> taus(n, kUnstopped), xs(n, 0.0);

    parallel_paths(n, resolve_threads(cfg.threads), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
            double x = cfg.initial.quantile(rng.next_uniform());
            double t = 0.0;
            if (t >= barrier.eval(x, cfg.hit_rule)) {
                taus[p] = 0.0;
                xs[p] = x;
                continue;
            }
            for (std::int64_t k = 1; k <= max_steps; ++k) {
                const double z = rng.next_normal();
                x += cfg.sigma(t, x) * sqrt_dt * z;
                t = static_cast<double>(k) * cfg.dt;
                if (t >= barrier.eval(x, cfg.hit_rule)) {
                    taus[p] = t;
                    xs[p] = x;
                    break;
                }
            }
        }
    });

    EmbeddingReport rep;
    rep.n_paths = n;
    rep.seed = cfg.seed;
    rep.tau_samples.reserve(n);
    rep.x_samples.reserve(n);
    double sum_t = 0.0, sum_t2 = 0.0;
    for (std::int64_t p = 0; p < n; ++p) {
        if (taus[p] == kUnstopped) continue;
        rep.tau_samples.push_back(taus[p]);
        rep.x_samples.push_back(xs[p]);
        sum_t += taus[p];
        sum_t2 += taus[p] * taus[p];
    }
    const std::int64_t stopped = static_cast<std::int64_t>(rep.tau_samples.size());
    rep.unstopped_fraction = static_cast<double>(n - stopped) / static_cast<double>(n);
    if (stopped > 0) {
        rep.mean_tau = sum_t / stopped;
        rep.second_moment_tau = sum_t2 / stopped;
    }
    return rep;
}

double embedding_distance(std::span<const double> x_samples, const ProbabilityMeasure& nu,
                          std::span<const double> grid) {
    if (x_samples.empty()) throw EmptySample();
    auto emp = ProbabilityMeasure::empirical({x_samples.begin(), x_samples.end()});
    double sup = 0.0;
    for (double x : grid) sup = std::max(sup, std::abs(emp.potential(x) - nu.potential(x)));
    return sup;
}

namespace {

// Stopping structure for atomic targets: horizontal lines at the atom
// locations, active from the per-atom times. A path stops when the sampled
// segment crosses an active line; the stopped location is the line level.
struct LineBarrier {
    std::vector<double> levels; // increasing
    std::vector<double> times;
};

struct ProbeResult {
    std::vector<double> mass; // stopped mass per level
    double unstopped = 0.0;
};

ProbeResult probe_line_barrier(const Sigma& sigma, const ProbabilityMeasure& mu,
                               const LineBarrier& lb, std::int64_t n_paths, double dt,
                               double t_max, std::uint64_t seed, int threads) {
    const double sqrt_dt = std::sqrt(dt);
    const std::int64_t max_steps = static_cast<std::int64_t>(std::ceil(t_max / dt));
    const std::size_t m = lb.levels.size();

    std::vector<std::int64_t> counts(m, 0);
    std::int64_t unstopped_total = 0;
    std::mutex merge_mutex;

    parallel_paths(n_paths, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> local(m, 0);
        std::int64_t local_unstopped = 0;
        for (std::int64_t p = lo; p < hi; ++p) {
            PathRng rng(seed, static_cast<std::uint64_t>(p));
            double x = mu.quantile(rng.next_uniform());
            double t = 0.0;
            int stopped_at = -1;
            // a start exactly on an immediately-active line stops at once
            for (std::size_t i = 0; i < m; ++i) {
                if (lb.times[i] <= 0.0 && x == lb.levels[i]) {
                    stopped_at = static_cast<int>(i);
                    break;
                }
            }
            if (stopped_at < 0) {
                for (std::int64_t k = 1; k <= max_steps; ++k) {
                    const double z = rng.next_normal();
                    const double xn = x + sigma(t, x) * sqrt_dt * z;
                    const double tn = static_cast<double>(k) * dt;
                    // first active line crossed along the segment, in travel order
                    if (xn > x) {
                        auto it = std::upper_bound(lb.levels.begin(), lb.levels.end(), x);
                        for (; it != lb.levels.end() && *it <= xn; ++it) {
                            const std::size_t i = static_cast<std::size_t>(it - lb.levels.begin());
                            if (lb.times[i] <= tn) {
                                stopped_at = static_cast<int>(i);
                                break;
                            }
                        }
                    } else if (xn < x) {
                        auto it = std::lower_bound(lb.levels.begin(), lb.levels.end(), x);
                        while (it != lb.levels.begin()) {
                            --it;
                            if (*it < xn) break;
                            const std::size_t i = static_cast<std::size_t>(it - lb.levels.begin());
                            if (lb.times[i] <= tn) {
                                stopped_at = static_cast<int>(i);
                                break;
                            }
                        }
                    }
                    if (stopped_at >= 0) break;
                    x = xn;
                    t = tn;
                }
            }
            if (stopped_at >= 0)
                ++local[static_cast<std::size_t>(stopped_at)];
            else
                ++local_unstopped;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t i = 0; i < m; ++i) counts[i] += local[i];
        unstopped_total += local_unstopped;
    });

    ProbeResult res;
    res.mass.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        res.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(n_paths);
    res.unstopped = static_cast<double>(unstopped_total) / static_cast<double>(n_paths);
    return res;
}

} // namespace

RootBarrier solve_atomic_barrier(const Sigma& sigma, const ProbabilityMeasure& mu,
                                 const ProbabilityMeasure& nu, std::span<const double> contact,
                                 std::int64_t mc_budget, double tol_mass, std::uint64_t seed,
                                 double probe_dt, int max_sweeps) {
    if (!nu.is_atomic()) throw ConfigError("solve_atomic_barrier needs an atomic target");
    {
        std::vector<double> grid{nu.support_lo() - 1.0, 0.5 * (nu.support_lo() + nu.support_hi()),
                                 nu.support_hi() + 1.0};
        const auto order_res = convex_order_check(mu, nu, grid);
        if (!order_res.ordered) throw OrderViolation(*order_res.witness);
    }

    // levels = atoms of nu plus any extra contact points, all sorted
    std::vector<double> levels(nu.atom_positions());
    for (double c : contact)
        if (std::find(levels.begin(), levels.end(), c) == levels.end()) levels.push_back(c);
    std::sort(levels.begin(), levels.end());

    const std::size_t m = levels.size();
    std::vector<double> target(m, 0.0), times(m, 0.0);
    std::vector<bool> free_idx(m, false);
    const auto& apos = nu.atom_positions();
    const auto& amass = nu.atom_masses();
    for (std::size_t i = 0; i < m; ++i) {
        const auto it = std::lower_bound(apos.begin(), apos.end(), levels[i]);
        if (it != apos.end() && *it == levels[i])
            target[i] = amass[static_cast<std::size_t>(it - apos.begin())];
        const bool in_contact =
            std::find(contact.begin(), contact.end(), levels[i]) != contact.end();
        free_idx[i] = !in_contact && target[i] > 0.0;
    }

    const int threads = resolve_threads(0);
    const double t_cap = 64.0;
    LineBarrier lb{levels, times};
    auto probe = [&]() {
        return probe_line_barrier(sigma, mu, lb, mc_budget, probe_dt, t_cap, seed, threads);
    };

    // sweep order: largest potential gap first
    std::vector<std::size_t> sweep_order;
    for (std::size_t i = 0; i < m; ++i)
        if (free_idx[i]) sweep_order.push_back(i);
    std::sort(sweep_order.begin(), sweep_order.end(), [&](std::size_t a, std::size_t b) {
        const double ga = std::abs(mu.potential(levels[a]) - nu.potential(levels[a]));
        const double gb = std::abs(mu.potential(levels[b]) - nu.potential(levels[b]));
        return ga > gb;
    });

    if (!sweep_order.empty()) {
        bool converged = false;
        int sweep = 0;
        for (; sweep < max_sweeps && !converged; ++sweep) {
            for (std::size_t i : sweep_order) {
                // bisect b_i: stopped mass at level i decreases in b_i
                double lo = 0.0, hi = 1.0;
                lb.times[i] = 0.0;
                if (probe().mass[i] <= target[i] + tol_mass) {
                    continue; // even an immediate line cannot over-embed
                }
                lb.times[i] = hi;
                double mass_hi = probe().mass[i];
                while (mass_hi > target[i] && hi < 0.5 * t_cap) {
                    hi *= 2.0;
                    lb.times[i] = hi;
                    mass_hi = probe().mass[i];
                }
                for (int it = 0; it < 24; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    lb.times[i] = mid;
                    const double mass = probe().mass[i];
                    if (std::abs(mass - target[i]) <= 0.25 * tol_mass) break;
                    if (mass > target[i])
                        lo = mid;
                    else
                        hi = mid;
                    if (hi - lo < 0.5 * probe_dt) break;
                }
            }
            const auto res = probe();
            converged = true;
            for (std::size_t i : sweep_order)
                if (std::abs(res.mass[i] - target[i]) > tol_mass) converged = false;
        }
        if (!converged) throw NoConvergence(max_sweeps);
    }

    // returned barrier lives on the level grid
    double sentinel = 1.0;
    for (double t : lb.times) sentinel = std::max(sentinel, 2.0 * t + 1.0);
    auto f = lb.times;
    f.front() = 0.0;
    f.back() = 0.0;
    return RootBarrier(levels, std::move(f), sentinel, BarrierProvenance::Direct);
}

StoppedMoments stopped_moments(const EmbeddingReport& report,
                               const std::function<double(double)>& f) {
    if (report.unstopped_fraction >= 0.01) throw TooManyUnstopped(report.unstopped_fraction);
    if (report.tau_samples.empty()) throw EmptySample();
    const std::size_t n = report.tau_samples.size();
    double s1 = 0.0, s2 = 0.0, sf = 0.0;
    for (double t : report.tau_samples) {
        s1 += t;
        s2 += t * t;
        sf += f(t);
    }
    StoppedMoments out;
    out.mean_tau = s1 / n;
    out.second_moment_tau = s2 / n;
    out.mean_f = sf / n;
    double v1 = 0.0, v2 = 0.0, vf = 0.0;
    for (double t : report.tau_samples) {
        v1 += (t - out.mean_tau) * (t - out.mean_tau);
        v2 += (t * t - out.second_moment_tau) * (t * t - out.second_moment_tau);
        const double ft = f(t);
        vf += (ft - out.mean_f) * (ft - out.mean_f);
    }
    const double denom = n > 1 ? static_cast<double>(n) * (n - 1) : 1.0;
    out.se_mean_tau = std::sqrt(v1 / denom);
    out.se_second_moment_tau = std::sqrt(v2 / denom);
    out.se_mean_f = std::sqrt(vf / denom);
    return out;
}

} // namespace rootb
