#pragma once

#include "rootb/measures.hpp"
#include "rootb/pde.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rootb {

enum class BarrierProvenance { FromPde, Direct, Manual };

enum class HitRule {
    Linear,      // f interpolated linearly between columns
    MinNeighbor, // f = min of the two bracketing columns (conservative)
};

/// A Root barrier as its barrier function on a spatial grid: the closed set
/// is { (t, x) : t >= f(x) }. Values live in [0, inf_sentinel] where the
/// sentinel (2T for PDE-extracted barriers) encodes "never". Both extreme
/// grid points must carry f = 0; they stand in for the +-infinity rows of a
/// barrier. Immutable after construction.
class RootBarrier {
public:
    RootBarrier(std::vector<double> xs, std::vector<double> f, double inf_sentinel,
                BarrierProvenance prov);

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& f() const { return f_; }
    double inf_sentinel() const { return inf_sentinel_; }
    BarrierProvenance provenance() const { return prov_; }

    bool is_inf(std::size_t j) const { return f_[j] >= inf_sentinel_; }

    /// Barrier function evaluated at arbitrary x under the given rule;
    /// outside the grid the extreme columns (f = 0) apply.
    double eval(double x, HitRule rule = HitRule::Linear) const;

    /// Membership test for the closed set.
    bool contains(double t, double x, HitRule rule = HitRule::Linear) const {
        return t >= eval(x, rule);
    }

private:
    std::vector<double> xs_, f_;
    double inf_sentinel_;
    BarrierProvenance prov_;
};

/// Contact-set reading of an obstacle solve: per column the first grid time
/// with u - u_nu <= tol, linearly interpolated between the bracketing steps;
/// 2T where contact is never reached. The extreme columns are pinned to 0.
RootBarrier extract_barrier(const PdeSolution& sol, const ProbabilityMeasure& nu, double tol);

/// Same reading from a streaming solve.
RootBarrier extract_barrier(const StreamingObstacleResult& res);

/// Forces f = 0 on the given contact points (each must be a grid point of b).
RootBarrier regularize(const RootBarrier& b, std::span<const double> contact);

enum class CombineMode { Union, Intersection };

/// Union = pointwise min of the barrier functions, Intersection = pointwise
/// max. Requires identical grids.
RootBarrier combine(const RootBarrier& b1, const RootBarrier& b2, CombineMode mode);

/// Hausdorff distance between the sampled closed graphs after the
/// compactifying map (t,x) -> (t/(1+t), x/(1+|x|)); each column contributes
/// its barrier point plus 64 samples of the vertical ray above it.
double barrier_distance(const RootBarrier& b1, const RootBarrier& b2);

/// First sample time t_i with t_i >= f(x_i) along a discrete path, or
/// nullopt if the path never enters the barrier.
std::optional<double> hit_time(const RootBarrier& b, std::span<const std::pair<double, double>> path,
                               HitRule rule = HitRule::Linear);

} // namespace rootb
