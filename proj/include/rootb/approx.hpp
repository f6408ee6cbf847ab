#pragma once

#include "rootb/measures.hpp"

#include <vector>

namespace rootb {

struct SupportLine {
    double slope = 0.0, intercept = 0.0;
    double at(double x) const { return slope * x + intercept; }
};

/// Finitely supported approximation nu_N of a target nu, sandwiched in convex
/// order between mu and nu and coinciding with mu outside the window
/// [m-N, m+N].
struct AtomicApproximation {
    ProbabilityMeasure measure;
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<SupportLine> lines; // envelope lines used inside the window
};

/// Builds u_{nu_N} as the pointwise minimum of u_mu with tangent lines to
/// u_nu at the nu-quantiles j/(k+1) (the atom locations when nu is atomic
/// with at most k atoms), each raised minimally so the envelope passes
/// through the pins (m+-N, u_mu(m+-N)); the measure is read off the kinks as
/// half the slope jumps. Requires an atomic mu so the construction is exact.
AtomicApproximation atomic_approximation(const ProbabilityMeasure& mu,
                                         const ProbabilityMeasure& nu, double N, int k);

} // namespace rootb
