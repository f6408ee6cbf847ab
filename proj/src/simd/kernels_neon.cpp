// NEON variants of the row-update kernels (aarch64). Operation order matches
// the scalar reference per element; no fused contractions.

#include "rootb/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace rootb::kern {

namespace {

inline float64x2_t laplace(const double* u, std::size_t j) {
    const float64x2_t um = vld1q_f64(u + j - 1);
    const float64x2_t u0 = vld1q_f64(u + j);
    const float64x2_t up = vld1q_f64(u + j + 1);
    return vaddq_f64(vsubq_f64(up, vmulq_n_f64(u0, 2.0)), um);
}

void heat_step_neon(const double* u, const double* c, double* out, std::size_t n) {
    std::size_t j = 1;
    for (; j + 1 <= n; j += 2) {
        const float64x2_t lap = laplace(u, j);
        const float64x2_t cj = vld1q_f64(c + j);
        const float64x2_t u0 = vld1q_f64(u + j);
        vst1q_f64(out + j, vaddq_f64(u0, vmulq_f64(cj, lap)));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + c[j] * lap;
    }
}

void obstacle_step_neon(const double* u, const double* c, const double* obst, double* out,
                        std::size_t n) {
    std::size_t j = 1;
    for (; j + 1 <= n; j += 2) {
        const float64x2_t lap = laplace(u, j);
        const float64x2_t cj = vld1q_f64(c + j);
        const float64x2_t u0 = vld1q_f64(u + j);
        const float64x2_t heat = vaddq_f64(u0, vmulq_f64(cj, lap));
        vst1q_f64(out + j, vmaxq_f64(vld1q_f64(obst + j), heat));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = std::max(obst[j], u[j] + c[j] * lap);
    }
}

void penalty_step_neon(const double* u, const double* c, const double* obst, double p, double* out,
                       std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t j = 1;
    for (; j + 1 <= n; j += 2) {
        const float64x2_t lap = laplace(u, j);
        const float64x2_t cj = vld1q_f64(c + j);
        const float64x2_t u0 = vld1q_f64(u + j);
        const float64x2_t ob = vld1q_f64(obst + j);
        const float64x2_t push = vmaxq_f64(vsubq_f64(ob, u0), zero);
        const float64x2_t heat = vaddq_f64(u0, vmulq_f64(cj, lap));
        vst1q_f64(out + j, vaddq_f64(heat, vmulq_n_f64(push, p)));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        const double push = std::max(obst[j] - u[j], 0.0);
        out[j] = (u[j] + c[j] * lap) + p * push;
    }
}

void rost_step_neon(const double* u, const double* c, double* out, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t j = 1;
    for (; j + 1 <= n; j += 2) {
        const float64x2_t lap = laplace(u, j);
        const float64x2_t cj = vld1q_f64(c + j);
        const float64x2_t u0 = vld1q_f64(u + j);
        vst1q_f64(out + j, vaddq_f64(u0, vminq_f64(vmulq_f64(cj, lap), zero)));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + std::min(c[j] * lap, 0.0);
    }
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 1 < n; j += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + j), vld1q_f64(b + j));
        acc = vmaxq_f64(acc, vabsq_f64(d));
    }
    double m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
    for (; j < n; ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace

const Kernels& neon() {
    static const Kernels k{heat_step_neon, obstacle_step_neon, penalty_step_neon, rost_step_neon,
                           max_abs_diff_neon, "neon"};
    return k;
}

} // namespace rootb::kern

#endif // __aarch64__
