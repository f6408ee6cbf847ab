#pragma once

#include "rootb/errors.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rootb {

enum class MeasureKind { Atomic, Gaussian, Lognormal, Uniform };

/// A probability law on the real line with finite first and second moments.
///
/// Atomic laws (including empirical ones, which are merged into equal-weight
/// atoms) carry their atoms sorted by location together with prefix sums so
/// the potential function, CDF and quantiles are exact closed forms. The
/// parametric kinds use their analytic formulas throughout.
///
/// Immutable after construction; all member functions are const and
/// thread-safe.
class ProbabilityMeasure {
public:
    static ProbabilityMeasure atomic(std::vector<std::pair<double, double>> atoms);
    static ProbabilityMeasure dirac(double location);
    static ProbabilityMeasure gaussian(double mean, double variance);
    static ProbabilityMeasure lognormal(double log_mean, double log_variance);
    static ProbabilityMeasure uniform(double lo, double hi);
    /// Empirical law: equal weights, ties merged; stored as atomic.
    static ProbabilityMeasure empirical(std::vector<double> samples);

    MeasureKind kind() const { return kind_; }
    double mean() const { return mean_; }
    double second_moment() const { return second_moment_; }
    double variance() const { return second_moment_ - mean_ * mean_; }

    /// Potential function u(x) = -E|x - Y|, exact for every kind.
    double potential(double x) const;
    /// P[Y <= x].
    double cdf(double x) const;
    /// Generalized inverse of the CDF, p in (0,1).
    double quantile(double p) const;

    /// Essential support bounds (may be +-infinity).
    double support_lo() const;
    double support_hi() const;

    bool is_atomic() const { return kind_ == MeasureKind::Atomic; }
    const std::vector<double>& atom_positions() const { return pos_; }
    const std::vector<double>& atom_masses() const { return mass_; }

    // Parametric parameters (valid for the matching kind only).
    double param1() const { return p1_; }
    double param2() const { return p2_; }

private:
    ProbabilityMeasure() = default;

    MeasureKind kind_ = MeasureKind::Atomic;
    double mean_ = 0.0, second_moment_ = 0.0;
    double p1_ = 0.0, p2_ = 0.0; // (mean,var) / (log-mean,log-var) / (lo,hi)
    std::vector<double> pos_, mass_;
    std::vector<double> cum_mass_, cum_xmass_; // prefix sums over atoms
};

struct ConvexOrderResult {
    bool ordered = false;
    std::optional<double> witness; // point where u_mu < u_nu - tol
};

/// Checks mu <=_cx nu by comparing potentials on the grid plus all atom
/// locations of both measures. Throws MeanMismatch when the means differ by
/// more than 1e-9.
ConvexOrderResult convex_order_check(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                     std::span<const double> grid);

/// Grid points where the two potentials coincide within tol; both grid
/// endpoints are always included (they stand in for +-infinity).
std::vector<double> contact_set(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                std::span<const double> grid, double tol);

/// contact_set with the default relative tolerance 1e-8 * (1 + |u_nu(x)|).
std::vector<double> contact_set(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                std::span<const double> grid);

/// Implied atomic law from undiscounted call prices via discrete second
/// differences. Residual mass goes to the extreme strikes, shifted minimally
/// so that the total mass is 1 and the mean equals the forward. Throws
/// ArbitrageDetected when the price curve violates monotonicity or convexity.
ProbabilityMeasure breeden_litzenberger(std::span<const double> strikes,
                                        std::span<const double> call_prices, double forward);

} // namespace rootb
