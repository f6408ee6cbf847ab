#include "rootb/approx.hpp"

#include <algorithm>
#include <cmath>

namespace rootb {

namespace {

// Lower envelope of a set of lines (min over lines), returned as segments
// active from breakpoint[i] to breakpoint[i+1]; slopes strictly decreasing.
struct Envelope {
    std::vector<SupportLine> lines; // active pieces, slope decreasing
    std::vector<double> breaks;     // size lines.size()-1, increasing
};

double intersect(const SupportLine& a, const SupportLine& b) {
    return (b.intercept - a.intercept) / (a.slope - b.slope);
}

Envelope lower_envelope(std::vector<SupportLine> lines) {
    std::sort(lines.begin(), lines.end(), [](const SupportLine& a, const SupportLine& b) {
        if (a.slope != b.slope) return a.slope > b.slope;
        return a.intercept < b.intercept;
    });
    // drop duplicate slopes (keep lowest intercept)
    std::vector<SupportLine> uniq;
    for (const auto& l : lines)
        if (uniq.empty() || l.slope != uniq.back().slope) uniq.push_back(l);

    std::vector<SupportLine> hull;
    std::vector<double> breaks;
    for (const auto& l : uniq) {
        while (!hull.empty()) {
            if (hull.size() == 1) break; // distinct slopes always cross once
            const double x_prev = breaks.back();
            if (intersect(hull.back(), l) <= x_prev) {
                hull.pop_back();
                breaks.pop_back();
            } else {
                break;
            }
        }
        if (hull.empty()) {
            hull.push_back(l);
        } else {
            breaks.push_back(intersect(hull.back(), l));
            hull.push_back(l);
        }
    }
    return {std::move(hull), std::move(breaks)};
}

// slope of the envelope just right of x (ties advance past the break)
double env_slope_after(const Envelope& e, double x) {
    std::size_t i = 0;
    while (i < e.breaks.size() && x >= e.breaks[i]) ++i;
    return e.lines[i].slope;
}

// slope of the envelope just left of x
double env_slope_before(const Envelope& e, double x) {
    std::size_t i = 0;
    while (i < e.breaks.size() && x > e.breaks[i]) ++i;
    return e.lines[i].slope;
}

} // namespace

AtomicApproximation atomic_approximation(const ProbabilityMeasure& mu,
                                         const ProbabilityMeasure& nu, double N, int k) {
    if (!mu.is_atomic())
        throw ConfigError("atomic_approximation needs an atomic (or empirical) mu");
    if (!(N > 0.0)) throw ConfigError("window half-width N must be > 0");
    if (k < 2) throw ConfigError("need at least k = 2 tangent lines");

    const double m = mu.mean();
    const double lo = m - N, hi = m + N;
    {
        std::vector<double> probe{lo - 1.0, lo, 0.5 * (lo + hi), hi, hi + 1.0};
        const auto order = convex_order_check(mu, nu, probe);
        if (!order.ordered) throw OrderViolation(*order.witness);
    }

    // tangency abscissas: nu's own atoms when few, else equally spaced quantiles
    std::vector<double> abscissas;
    if (nu.is_atomic() && static_cast<int>(nu.atom_positions().size()) <= k) {
        abscissas = nu.atom_positions();
    } else {
        for (int j = 1; j <= k; ++j)
            abscissas.push_back(nu.quantile(static_cast<double>(j) / (k + 1)));
        std::sort(abscissas.begin(), abscissas.end());
        abscissas.erase(std::unique(abscissas.begin(), abscissas.end()), abscissas.end());
    }
    abscissas.erase(std::remove_if(abscissas.begin(), abscissas.end(),
                                   [&](double x) { return x < lo || x > hi; }),
                    abscissas.end());

    const double u_mu_lo = mu.potential(lo), u_mu_hi = mu.potential(hi);

    std::vector<SupportLine> lines;
    // tangents to u_nu, raised minimally to clear both pins
    for (double x0 : abscissas) {
        SupportLine l;
        l.slope = 1.0 - 2.0 * nu.cdf(x0);
        l.intercept = nu.potential(x0) - l.slope * x0;
        const double lift = std::max({0.0, u_mu_lo - l.at(lo), u_mu_hi - l.at(hi)});
        l.intercept += lift;
        lines.push_back(l);
    }
    // pin lines: support lines of u_mu at the window edges
    for (double xp : {lo, hi}) {
        SupportLine l;
        l.slope = 1.0 - 2.0 * mu.cdf(xp);
        l.intercept = mu.potential(xp) - l.slope * xp;
        lines.push_back(l);
    }
    // u_mu itself as the min of its segment lines: the left asymptote plus
    // the right tangent at every atom
    const auto& apos = mu.atom_positions();
    {
        SupportLine asym;
        asym.slope = 1.0;
        asym.intercept = mu.potential(apos.front()) - apos.front();
        lines.push_back(asym);
        for (double a : apos) {
            SupportLine l;
            l.slope = 1.0 - 2.0 * mu.cdf(a);
            l.intercept = mu.potential(a) - l.slope * a;
            lines.push_back(l);
        }
    }

    const Envelope env = lower_envelope(lines);

    // kinks of the glued function: mu's atoms outside the open window, the
    // pins, and the envelope breakpoints strictly inside
    struct Kink {
        double x, s_left, s_right;
    };
    std::vector<Kink> kinks;
    const auto& amass = mu.atom_masses();
    auto mu_slope_left = [&](double x) {
        double f = 0.0;
        for (std::size_t i = 0; i < apos.size() && apos[i] < x; ++i) f += amass[i];
        return 1.0 - 2.0 * f;
    };
    auto mu_slope_right = [&](double x) { return 1.0 - 2.0 * mu.cdf(x); };

    for (std::size_t i = 0; i < apos.size(); ++i)
        if (apos[i] < lo || apos[i] > hi)
            kinks.push_back({apos[i], mu_slope_left(apos[i]), mu_slope_right(apos[i])});
    kinks.push_back({lo, mu_slope_left(lo), env_slope_after(env, lo)});
    kinks.push_back({hi, env_slope_before(env, hi), mu_slope_right(hi)});
    for (std::size_t i = 0; i < env.breaks.size(); ++i)
        if (env.breaks[i] > lo && env.breaks[i] < hi)
            kinks.push_back({env.breaks[i], env.lines[i].slope, env.lines[i + 1].slope});

    std::sort(kinks.begin(), kinks.end(), [](const Kink& a, const Kink& b) { return a.x < b.x; });

    std::vector<std::pair<double, double>> atoms;
    for (const auto& kk : kinks) {
        const double mass = 0.5 * (kk.s_left - kk.s_right);
        if (mass > 1e-14) {
            if (!atoms.empty() && atoms.back().first == kk.x)
                atoms.back().second += mass;
            else
                atoms.emplace_back(kk.x, mass);
        }
    }

    return AtomicApproximation{ProbabilityMeasure::atomic(std::move(atoms)), lo, hi, env.lines};
}

} // namespace rootb
