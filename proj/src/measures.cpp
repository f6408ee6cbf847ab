#include "rootb/measures.hpp"

#include "rootb/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rootb {

namespace {

constexpr double kMassSumTol = 1e-12;

// compensated summation so the mass invariant stays meaningful for
// empirical laws with very many atoms
double kahan_sum(const std::vector<std::pair<double, double>>& atoms) {
    double s = 0.0, c = 0.0;
    for (const auto& [x, p] : atoms) {
        const double y = p - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace

ProbabilityMeasure ProbabilityMeasure::atomic(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw ConfigError("atomic measure needs at least one atom");
    std::sort(atoms.begin(), atoms.end());
    // merge ties, validate masses
    std::vector<std::pair<double, double>> merged;
    for (const auto& [x, p] : atoms) {
        if (!std::isfinite(x)) throw NonFiniteMoment("atom location not finite");
        if (p <= 0.0) throw ConfigError("atom masses must be positive");
        if (!merged.empty() && x == merged.back().first)
            merged.back().second += p;
        else
            merged.emplace_back(x, p);
    }
    const double total = kahan_sum(merged);
    if (std::abs(total - 1.0) > kMassSumTol)
        throw ConfigError("atom masses sum to " + std::to_string(total) + ", expected 1");

    ProbabilityMeasure m;
    m.kind_ = MeasureKind::Atomic;
    m.pos_.reserve(merged.size());
    m.mass_.reserve(merged.size());
    m.cum_mass_.reserve(merged.size());
    m.cum_xmass_.reserve(merged.size());
    double cm = 0.0, cxm = 0.0, sm = 0.0;
    for (const auto& [x, p] : merged) {
        m.pos_.push_back(x);
        m.mass_.push_back(p);
        cm += p;
        cxm += p * x;
        sm += p * x * x;
        m.cum_mass_.push_back(cm);
        m.cum_xmass_.push_back(cxm);
    }
    m.mean_ = cxm;
    m.second_moment_ = sm;
    return m;
}

ProbabilityMeasure ProbabilityMeasure::dirac(double location) {
    return atomic({{location, 1.0}});
}

ProbabilityMeasure ProbabilityMeasure::gaussian(double mean, double variance) {
    if (variance < 0.0) throw ConfigError("gaussian variance must be >= 0");
    if (variance == 0.0) return dirac(mean);
    if (!std::isfinite(mean) || !std::isfinite(variance))
        throw NonFiniteMoment("gaussian parameters not finite");
    ProbabilityMeasure m;
    m.kind_ = MeasureKind::Gaussian;
    m.p1_ = mean;
    m.p2_ = variance;
    m.mean_ = mean;
    m.second_moment_ = mean * mean + variance;
    return m;
}

ProbabilityMeasure ProbabilityMeasure::lognormal(double log_mean, double log_variance) {
    if (log_variance < 0.0) throw ConfigError("lognormal log-variance must be >= 0");
    if (log_variance == 0.0) return dirac(std::exp(log_mean));
    if (!std::isfinite(log_mean) || !std::isfinite(log_variance))
        throw NonFiniteMoment("lognormal parameters not finite");
    ProbabilityMeasure m;
    m.kind_ = MeasureKind::Lognormal;
    m.p1_ = log_mean;
    m.p2_ = log_variance;
    m.mean_ = std::exp(log_mean + 0.5 * log_variance);
    m.second_moment_ = std::exp(2.0 * log_mean + 2.0 * log_variance);
    return m;
}

ProbabilityMeasure ProbabilityMeasure::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        if (lo == hi) return dirac(lo);
        throw ConfigError("uniform needs lo < hi");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonFiniteMoment("uniform bounds not finite");
    ProbabilityMeasure m;
    m.kind_ = MeasureKind::Uniform;
    m.p1_ = lo;
    m.p2_ = hi;
    m.mean_ = 0.5 * (lo + hi);
    m.second_moment_ = (hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo));
    return m;
}

ProbabilityMeasure ProbabilityMeasure::empirical(std::vector<double> samples) {
    if (samples.empty()) throw EmptySample();
    const double w = 1.0 / static_cast<double>(samples.size());
    std::sort(samples.begin(), samples.end());
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(samples.size());
    for (double s : samples) {
        if (!atoms.empty() && s == atoms.back().first)
            atoms.back().second += w;
        else
            atoms.emplace_back(s, w);
    }
    // renormalize away accumulated rounding
    const double total = kahan_sum(atoms);
    for (auto& [x, p] : atoms) p /= total;
    return atomic(std::move(atoms));
}

double ProbabilityMeasure::potential(double x) const {
    switch (kind_) {
    case MeasureKind::Atomic: {
        // E|x-Y| = 2x M(x) - 2 S(x) + mean - x with M, S prefix sums up to x
        auto it = std::upper_bound(pos_.begin(), pos_.end(), x);
        double M = 0.0, S = 0.0;
        if (it != pos_.begin()) {
            std::size_t i = static_cast<std::size_t>(it - pos_.begin()) - 1;
            M = cum_mass_[i];
            S = cum_xmass_[i];
        }
        return -(2.0 * x * M - 2.0 * S + mean_ - x);
    }
    case MeasureKind::Gaussian: {
        const double s = std::sqrt(p2_);
        const double d = x - p1_;
        const double z = d / s;
        return -(s * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * z * z) + d * std::erf(z * M_SQRT1_2));
    }
    case MeasureKind::Lognormal: {
        if (x <= 0.0) return -(mean_ - x);
        const double sv = std::sqrt(p2_);
        const double d1 = (p1_ + p2_ - std::log(x)) / sv;
        const double d2 = d1 - sv;
        const double call = mean_ * normal_cdf(d1) - x * normal_cdf(d2);
        return -(2.0 * call + x - mean_);
    }
    case MeasureKind::Uniform: {
        if (x <= p1_) return -(mean_ - x);
        if (x >= p2_) return -(x - mean_);
        const double l = x - p1_, r = p2_ - x;
        return -0.5 * (l * l + r * r) / (p2_ - p1_);
    }
    }
    return 0.0; // unreachable
}

double ProbabilityMeasure::cdf(double x) const {
    switch (kind_) {
    case MeasureKind::Atomic: {
        auto it = std::upper_bound(pos_.begin(), pos_.end(), x);
        if (it == pos_.begin()) return 0.0;
        return cum_mass_[static_cast<std::size_t>(it - pos_.begin()) - 1];
    }
    case MeasureKind::Gaussian:
        return normal_cdf((x - p1_) / std::sqrt(p2_));
    case MeasureKind::Lognormal:
        if (x <= 0.0) return 0.0;
        return normal_cdf((std::log(x) - p1_) / std::sqrt(p2_));
    case MeasureKind::Uniform:
        if (x <= p1_) return 0.0;
        if (x >= p2_) return 1.0;
        return (x - p1_) / (p2_ - p1_);
    }
    return 0.0;
}

double ProbabilityMeasure::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile needs p in (0,1)");
    switch (kind_) {
    case MeasureKind::Atomic: {
        auto it = std::lower_bound(cum_mass_.begin(), cum_mass_.end(), p);
        if (it == cum_mass_.end()) return pos_.back();
        return pos_[static_cast<std::size_t>(it - cum_mass_.begin())];
    }
    case MeasureKind::Gaussian:
        return p1_ + std::sqrt(p2_) * normal_inv_cdf(p);
    case MeasureKind::Lognormal:
        return std::exp(p1_ + std::sqrt(p2_) * normal_inv_cdf(p));
    case MeasureKind::Uniform:
        return p1_ + p * (p2_ - p1_);
    }
    return 0.0;
}

double ProbabilityMeasure::support_lo() const {
    switch (kind_) {
    case MeasureKind::Atomic: return pos_.front();
    case MeasureKind::Gaussian: return -std::numeric_limits<double>::infinity();
    case MeasureKind::Lognormal: return 0.0;
    case MeasureKind::Uniform: return p1_;
    }
    return 0.0;
}

double ProbabilityMeasure::support_hi() const {
    switch (kind_) {
    case MeasureKind::Atomic: return pos_.back();
    case MeasureKind::Gaussian: return std::numeric_limits<double>::infinity();
    case MeasureKind::Lognormal: return std::numeric_limits<double>::infinity();
    case MeasureKind::Uniform: return p2_;
    }
    return 0.0;
}

namespace {

std::vector<double> gather_check_points(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                        std::span<const double> grid) {
    std::vector<double> pts(grid.begin(), grid.end());
    if (mu.is_atomic())
        pts.insert(pts.end(), mu.atom_positions().begin(), mu.atom_positions().end());
    if (nu.is_atomic())
        pts.insert(pts.end(), nu.atom_positions().begin(), nu.atom_positions().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace

ConvexOrderResult convex_order_check(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                     std::span<const double> grid) {
    if (std::abs(mu.mean() - nu.mean()) > 1e-9) throw MeanMismatch(mu.mean(), nu.mean());
    const auto pts = gather_check_points(mu, nu, grid);
    double worst_gap = 0.0;
    std::optional<double> witness;
    for (double x : pts) {
        const double gap = nu.potential(x) - mu.potential(x); // positive = violation
        if (gap > 1e-12 && gap > worst_gap) {
            worst_gap = gap;
            witness = x;
        }
    }
    if (witness) return {false, witness};
    return {true, std::nullopt};
}

std::vector<double> contact_set(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                std::span<const double> grid, double tol) {
    std::vector<double> out;
    if (grid.empty()) return out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const bool endpoint = (i == 0 || i + 1 == grid.size());
        if (endpoint || std::abs(mu.potential(x) - nu.potential(x)) <= tol) out.push_back(x);
    }
    return out;
}

std::vector<double> contact_set(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                std::span<const double> grid) {
    std::vector<double> out;
    if (grid.empty()) return out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double tol = 1e-8 * (1.0 + std::abs(nu.potential(x)));
        const bool endpoint = (i == 0 || i + 1 == grid.size());
        if (endpoint || std::abs(mu.potential(x) - nu.potential(x)) <= tol) out.push_back(x);
    }
    return out;
}

ProbabilityMeasure breeden_litzenberger(std::span<const double> strikes,
                                        std::span<const double> call_prices, double forward) {
    const std::size_t n = strikes.size();
    if (n < 3) throw ConfigError("breeden_litzenberger needs at least 3 strikes");
    if (call_prices.size() != n) throw ConfigError("strikes and prices size mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(strikes[i] < strikes[i + 1])) throw ConfigError("strikes must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i)
        if (call_prices[i] < 0.0) throw ArbitrageDetected(i, "negative call price");
    // monotonicity: non-increasing with slope >= -1
    std::vector<double> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        slope[i] = (call_prices[i + 1] - call_prices[i]) / (strikes[i + 1] - strikes[i]);
        if (slope[i] > 1e-12) throw ArbitrageDetected(i + 1, "call prices increase in strike");
        if (slope[i] < -1.0 - 1e-9) throw ArbitrageDetected(i + 1, "call spread steeper than -1");
    }
    // convexity
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (slope[i] < slope[i - 1] - 1e-12) throw ArbitrageDetected(i, "call prices not convex in strike");

    std::vector<std::pair<double, double>> atoms;
    double interior_mass = 0.0, interior_mean = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double q = std::max(0.0, slope[i] - slope[i - 1]);
        if (q > 0.0) {
            atoms.emplace_back(strikes[i], q);
            interior_mass += q;
            interior_mean += q * strikes[i];
        }
    }
    // boundary atoms solve: q0 + qn = 1 - interior_mass,
    //                       q0 k0 + qn kn = forward - interior_mean
    const double k0 = strikes.front(), kn = strikes.back();
    const double m_rest = 1.0 - interior_mass;
    double qn = (forward - interior_mean - m_rest * k0) / (kn - k0);
    double q0 = m_rest - qn;
    if (q0 < -1e-9 || qn < -1e-9)
        throw ArbitrageDetected(q0 < qn ? 0 : n - 1, "forward inconsistent with price curve");
    q0 = std::max(q0, 0.0);
    qn = std::max(qn, 0.0);
    if (q0 > 0.0) atoms.emplace_back(k0, q0);
    if (qn > 0.0) atoms.emplace_back(kn, qn);
    // rescale any residual rounding so masses sum to exactly 1
    double total = 0.0;
    for (auto& [x, p] : atoms) total += p;
    for (auto& [x, p] : atoms) p /= total;
    return ProbabilityMeasure::atomic(std::move(atoms));
}

} // namespace rootb
