#pragma once

#include <cstddef>

namespace rootb::kern {

/// Row-update kernels for the explicit schemes. Each updates the interior
/// entries j = 1..n of a row of length n+2; callers keep the boundary
/// columns. `u` and `out` must not alias.
///
/// The SIMD variants perform the identical per-element operation sequence as
/// the scalar reference (no FMA contraction), so outputs are bit-identical
/// across ISAs; the equivalence tests assert exactly that.
struct Kernels {
    // out[j] = u[j] + c[j]*(u[j+1] - 2 u[j] + u[j-1])
    void (*heat_step)(const double* u, const double* c, double* out, std::size_t n);
    // heat step then max with obst[j]
    void (*obstacle_step)(const double* u, const double* c, const double* obst, double* out,
                          std::size_t n);
    // heat step plus p * max(obst[j] - u[j], 0)
    void (*penalty_step)(const double* u, const double* c, const double* obst, double p,
                         double* out, std::size_t n);
    // out[j] = u[j] + min(0, c[j]*(u[j+1] - 2 u[j] + u[j-1]))
    void (*rost_step)(const double* u, const double* c, double* out, std::size_t n);
    // max_j |a[j] - b[j]| over j = 0..n-1
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    const char* name;
};

/// Scalar reference kernels.
const Kernels& scalar();

/// Best kernels for the running CPU, selected once at startup
/// (AVX2 on x86-64 when available, NEON on aarch64, scalar otherwise).
const Kernels& active();

#if defined(ROOTB_HAVE_AVX2_TU)
const Kernels& avx2();
bool cpu_has_avx2();
#endif
#if defined(ROOTB_HAVE_NEON_TU)
const Kernels& neon();
#endif

} // namespace rootb::kern
