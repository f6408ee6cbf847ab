#include "rootb/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rootb {

RootBarrier::RootBarrier(std::vector<double> xs, std::vector<double> f, double inf_sentinel,
                         BarrierProvenance prov)
    : xs_(std::move(xs)), f_(std::move(f)), inf_sentinel_(inf_sentinel), prov_(prov) {
    if (xs_.size() != f_.size() || xs_.size() < 2)
        throw ConfigError("barrier needs matching xs/f with >= 2 points");
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j)
        if (!(xs_[j] < xs_[j + 1])) throw ConfigError("barrier grid must be strictly increasing");
    if (!(inf_sentinel_ > 0.0)) throw ConfigError("barrier sentinel must be positive");
    for (double v : f_)
        if (!(v >= 0.0)) throw ConfigError("barrier values must be >= 0");
    if (f_.front() != 0.0 || f_.back() != 0.0)
        throw ConfigError("barrier must vanish at the extreme grid points");
}

double RootBarrier::eval(double x, HitRule rule) const {
    if (x <= xs_.front()) return f_.front();
    if (x >= xs_.back()) return f_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (rule == HitRule::MinNeighbor) return std::min(f_[i - 1], f_[i]);
    const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return f_[i - 1] + w * (f_[i] - f_[i - 1]);
}

RootBarrier extract_barrier(const PdeSolution& sol, const ProbabilityMeasure& nu, double tol) {
    if (sol.kind != PdeKind::Obstacle)
        throw ConfigError("extract_barrier needs an obstacle-kind solution");
    const Grid& g = sol.grid;
    const auto xs = g.xs();
    const int W = g.n_x + 2;
    const double dt = g.dt();
    const double sentinel = 2.0 * g.T;

    std::vector<double> f(W, sentinel);
    for (int j = 0; j < W; ++j) {
        const double hj = nu.potential(xs[j]);
        double prev_gap = sol.at(0, j) - hj;
        if (prev_gap <= tol) {
            f[j] = 0.0;
            continue;
        }
        for (int n = 1; n <= g.n_t; ++n) {
            const double gap = sol.at(n, j) - hj;
            if (gap <= tol) {
                const double drop = prev_gap - gap;
                const double frac = drop > 0.0 ? std::clamp((prev_gap - tol) / drop, 0.0, 1.0) : 1.0;
                f[j] = (n - 1) * dt + frac * dt;
                break;
            }
            prev_gap = gap;
        }
    }
    f.front() = 0.0;
    f.back() = 0.0;
    return RootBarrier(xs, std::move(f), sentinel, BarrierProvenance::FromPde);
}

RootBarrier extract_barrier(const StreamingObstacleResult& res) {
    auto f = res.contact_time;
    f.front() = 0.0;
    f.back() = 0.0;
    return RootBarrier(res.grid.xs(), std::move(f), 2.0 * res.grid.T, BarrierProvenance::FromPde);
}

RootBarrier regularize(const RootBarrier& b, std::span<const double> contact) {
    auto f = b.f();
    const auto& xs = b.xs();
    for (double x : contact) {
        const auto it = std::lower_bound(xs.begin(), xs.end(), x - 1e-9 * (1.0 + std::abs(x)));
        if (it == xs.end() || std::abs(*it - x) > 1e-9 * (1.0 + std::abs(x)))
            throw GridMismatch("contact point " + std::to_string(x) + " is not a barrier grid point");
        f[static_cast<std::size_t>(it - xs.begin())] = 0.0;
    }
    return RootBarrier(xs, std::move(f), b.inf_sentinel(), b.provenance());
}

RootBarrier combine(const RootBarrier& b1, const RootBarrier& b2, CombineMode mode) {
    if (b1.xs() != b2.xs()) throw GridMismatch("combine needs identical barrier grids");
    std::vector<double> f(b1.f().size());
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = (mode == CombineMode::Union) ? std::min(b1.f()[j], b2.f()[j])
                                            : std::max(b1.f()[j], b2.f()[j]);
    return RootBarrier(b1.xs(), std::move(f), std::max(b1.inf_sentinel(), b2.inf_sentinel()),
                       BarrierProvenance::Manual);
}

namespace {

struct CompactPoint {
    double t, x;
};

// (t,x) -> (t/(1+t), x/(1+|x|)); infinities map to the square's edge.
std::vector<CompactPoint> sample_graph(const RootBarrier& b) {
    constexpr int kRaySamples = 64;
    std::vector<CompactPoint> pts;
    pts.reserve(b.xs().size() * kRaySamples);
    for (std::size_t j = 0; j < b.xs().size(); ++j) {
        const double cx = b.xs()[j] / (1.0 + std::abs(b.xs()[j]));
        const double fj = b.f()[j];
        const double ct0 = b.is_inf(j) ? 1.0 : fj / (1.0 + fj);
        // vertical ray from f(x_j) up to t = +infinity, uniform in compact time
        for (int s = 0; s < kRaySamples; ++s) {
            const double ct = ct0 + (1.0 - ct0) * s / (kRaySamples - 1);
            pts.push_back({ct, cx});
        }
    }
    return pts;
}

double directed_hausdorff(const std::vector<CompactPoint>& from,
                          const std::vector<CompactPoint>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) {
            const double dt_ = p.t - q.t, dx_ = p.x - q.x;
            const double d2 = dt_ * dt_ + dx_ * dx_;
            if (d2 < best) best = d2;
            if (best == 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace

double barrier_distance(const RootBarrier& b1, const RootBarrier& b2) {
    const auto p1 = sample_graph(b1);
    const auto p2 = sample_graph(b2);
    return std::max(directed_hausdorff(p1, p2), directed_hausdorff(p2, p1));
}

std::optional<double> hit_time(const RootBarrier& b,
                               std::span<const std::pair<double, double>> path, HitRule rule) {
    double prev_t = -std::numeric_limits<double>::infinity();
    for (const auto& [t, x] : path) {
        if (t < prev_t) throw ConfigError("hit_time needs increasing path times");
        prev_t = t;
        if (t >= b.eval(x, rule)) return t;
    }
    return std::nullopt;
}

} // namespace rootb
