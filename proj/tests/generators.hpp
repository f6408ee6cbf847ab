#pragma once

// Random problem instances shared by the property suites: an atomic target nu
// and a coarsened mu obtained as the conditional expectation of nu under a
// random partition, which is in convex order below nu by construction.

#include "rootb/grid.hpp"
#include "rootb/measures.hpp"
#include "rootb/sigma.hpp"

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

namespace gen {

struct Instance {
    rootb::ProbabilityMeasure mu, nu;
    rootb::Sigma sigma;
    rootb::Grid grid;
};

inline std::pair<rootb::ProbabilityMeasure, rootb::ProbabilityMeasure>
convex_ordered_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(-2.5, 2.5), up(0.05, 1.0);
    const int k = 3 + static_cast<int>(rng() % 5);
    std::vector<std::pair<double, double>> nu_atoms;
    double tot = 0.0;
    for (int i = 0; i < k; ++i) {
        nu_atoms.emplace_back(ux(rng), up(rng));
        tot += nu_atoms.back().second;
    }
    for (auto& [x, p] : nu_atoms) p /= tot;
    std::sort(nu_atoms.begin(), nu_atoms.end());
    const int groups = 1 + static_cast<int>(rng() % 3);
    std::vector<std::pair<double, double>> mu_atoms;
    for (int g = 0; g < groups; ++g) {
        double gm = 0.0, gp = 0.0;
        for (int i = g; i < k; i += groups) {
            gm += nu_atoms[i].first * nu_atoms[i].second;
            gp += nu_atoms[i].second;
        }
        if (gp > 0.0) mu_atoms.emplace_back(gm / gp, gp);
    }
    return {rootb::ProbabilityMeasure::atomic(mu_atoms), rootb::ProbabilityMeasure::atomic(nu_atoms)};
}

inline Instance random_instance(std::mt19937_64& rng) {
    auto [mu, nu] = convex_ordered_pair(rng);
    std::uniform_real_distribution<double> usig(0.5, 1.5), uT(0.2, 1.0), uratio(0.3, 0.9),
        upad(0.2, 1.0);
    rootb::Sigma sigma = rootb::Sigma::constant(usig(rng));
    const double a = nu.support_lo() - upad(rng);
    const double b = nu.support_hi() + upad(rng);
    const double T = uT(rng);
    const int n_x = 24 + static_cast<int>(rng() % 25);
    auto grid = rootb::Grid::from_spatial(a, b, n_x, T, uratio(rng), sigma.sup_sq(a, b));
    return {std::move(mu), std::move(nu), std::move(sigma), grid};
}

} // namespace gen
