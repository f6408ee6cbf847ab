#pragma once

#include "rootb/barrier.hpp"
#include "rootb/measures.hpp"
#include "rootb/sigma.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rootb {

/// Euler-Maruyama configuration for dX = sigma(t,X) dB, X_0 ~ initial.
/// Paths use independent Philox streams indexed by path id, so results are
/// bit-identical for a fixed seed regardless of the thread count.
struct SdeConfig {
    Sigma sigma = Sigma::constant(1.0);
    ProbabilityMeasure initial = ProbabilityMeasure::dirac(0.0);
    double dt = 1e-3;
    double t_max = 10.0;
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 1;
    HitRule hit_rule = HitRule::Linear;
    int threads = 0; // 0 = hardware default, capped by ROOT_BARRIER_THREADS

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
        if (!(t_max >= dt)) throw ConfigError("t_max must be >= dt");
        if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
    }
};

/// Stopped samples (tau, X_tau) in path order; unstopped paths are excluded
/// from the arrays and counted in unstopped_fraction.
struct EmbeddingReport {
    std::vector<double> tau_samples, x_samples;
    double unstopped_fraction = 0.0;
    double potential_distance = std::numeric_limits<double>::quiet_NaN();
    double mean_tau = 0.0, second_moment_tau = 0.0;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Runs the SDE until the time-space process enters the barrier.
EmbeddingReport simulate_embedding(const SdeConfig& cfg, const RootBarrier& barrier);

/// sup over the grid of |u_empirical - u_nu| with u_empirical the exact
/// atomic potential of the sample law.
double embedding_distance(std::span<const double> x_samples, const ProbabilityMeasure& nu,
                          std::span<const double> grid);

/// Direct barrier construction for an atomic target: lines [b_i, inf) x {x_i}
/// at the atoms, with b = 0 pinned on the contact points, fitted by
/// coordinate-descent bisection until every free atom mass matches within
/// tol_mass. Probes are Monte Carlo runs of mc_budget paths with common
/// random numbers.
RootBarrier solve_atomic_barrier(const Sigma& sigma, const ProbabilityMeasure& mu,
                                 const ProbabilityMeasure& nu, std::span<const double> contact,
                                 std::int64_t mc_budget, double tol_mass,
                                 std::uint64_t seed = 20240617, double probe_dt = 5e-4,
                                 int max_sweeps = 8);

struct StoppedMoments {
    double mean_tau = 0.0, se_mean_tau = 0.0;
    double second_moment_tau = 0.0, se_second_moment_tau = 0.0;
    double mean_f = 0.0, se_mean_f = 0.0;
};

/// Sample means with standard errors; rejects reports with >= 1% unstopped
/// paths.
StoppedMoments stopped_moments(const EmbeddingReport& report,
                               const std::function<double(double)>& f);

} // namespace rootb
