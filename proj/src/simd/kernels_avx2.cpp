// AVX2 variants of the row-update kernels. Same operation order per element
// as the scalar reference and no FMA contraction, so results are
// bit-identical to scalar().

#include "rootb/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace rootb::kern {

namespace {

inline __m256d laplace(const double* u, std::size_t j) {
    const __m256d um = _mm256_loadu_pd(u + j - 1);
    const __m256d u0 = _mm256_loadu_pd(u + j);
    const __m256d up = _mm256_loadu_pd(u + j + 1);
    const __m256d two = _mm256_set1_pd(2.0);
    return _mm256_add_pd(_mm256_sub_pd(up, _mm256_mul_pd(two, u0)), um);
}

void heat_step_avx2(const double* u, const double* c, double* out, std::size_t n) {
    std::size_t j = 1;
    for (; j + 3 <= n; j += 4) {
        const __m256d lap = laplace(u, j);
        const __m256d cj = _mm256_loadu_pd(c + j);
        const __m256d u0 = _mm256_loadu_pd(u + j);
        _mm256_storeu_pd(out + j, _mm256_add_pd(u0, _mm256_mul_pd(cj, lap)));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + c[j] * lap;
    }
}

void obstacle_step_avx2(const double* u, const double* c, const double* obst, double* out,
                        std::size_t n) {
    std::size_t j = 1;
    for (; j + 3 <= n; j += 4) {
        const __m256d lap = laplace(u, j);
        const __m256d cj = _mm256_loadu_pd(c + j);
        const __m256d u0 = _mm256_loadu_pd(u + j);
        const __m256d heat = _mm256_add_pd(u0, _mm256_mul_pd(cj, lap));
        const __m256d ob = _mm256_loadu_pd(obst + j);
        _mm256_storeu_pd(out + j, _mm256_max_pd(ob, heat));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = std::max(obst[j], u[j] + c[j] * lap);
    }
}

void penalty_step_avx2(const double* u, const double* c, const double* obst, double p, double* out,
                       std::size_t n) {
    const __m256d pv = _mm256_set1_pd(p);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t j = 1;
    for (; j + 3 <= n; j += 4) {
        const __m256d lap = laplace(u, j);
        const __m256d cj = _mm256_loadu_pd(c + j);
        const __m256d u0 = _mm256_loadu_pd(u + j);
        const __m256d ob = _mm256_loadu_pd(obst + j);
        const __m256d push = _mm256_max_pd(_mm256_sub_pd(ob, u0), zero);
        const __m256d heat = _mm256_add_pd(u0, _mm256_mul_pd(cj, lap));
        _mm256_storeu_pd(out + j, _mm256_add_pd(heat, _mm256_mul_pd(pv, push)));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        const double push = std::max(obst[j] - u[j], 0.0);
        out[j] = (u[j] + c[j] * lap) + p * push;
    }
}

void rost_step_avx2(const double* u, const double* c, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t j = 1;
    for (; j + 3 <= n; j += 4) {
        const __m256d lap = laplace(u, j);
        const __m256d cj = _mm256_loadu_pd(c + j);
        const __m256d u0 = _mm256_loadu_pd(u + j);
        const __m256d decr = _mm256_min_pd(_mm256_mul_pd(cj, lap), zero);
        _mm256_storeu_pd(out + j, _mm256_add_pd(u0, decr));
    }
    for (; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + std::min(c[j] * lap, 0.0);
    }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 3 < n; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; j < n; ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace

const Kernels& avx2() {
    static const Kernels k{heat_step_avx2, obstacle_step_avx2, penalty_step_avx2, rost_step_avx2,
                           max_abs_diff_avx2, "avx2"};
    return k;
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

} // namespace rootb::kern
