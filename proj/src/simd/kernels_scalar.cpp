#include "rootb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rootb::kern {

namespace {

void heat_step_scalar(const double* u, const double* c, double* out, std::size_t n) {
    for (std::size_t j = 1; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + c[j] * lap;
    }
}

void obstacle_step_scalar(const double* u, const double* c, const double* obst, double* out,
                          std::size_t n) {
    for (std::size_t j = 1; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = std::max(obst[j], u[j] + c[j] * lap);
    }
}

void penalty_step_scalar(const double* u, const double* c, const double* obst, double p,
                         double* out, std::size_t n) {
    for (std::size_t j = 1; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        const double push = std::max(obst[j] - u[j], 0.0);
        out[j] = (u[j] + c[j] * lap) + p * push;
    }
}

void rost_step_scalar(const double* u, const double* c, double* out, std::size_t n) {
    for (std::size_t j = 1; j <= n; ++j) {
        const double lap = (u[j + 1] - 2.0 * u[j]) + u[j - 1];
        out[j] = u[j] + std::min(c[j] * lap, 0.0);
    }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace

const Kernels& scalar() {
    static const Kernels k{heat_step_scalar, obstacle_step_scalar, penalty_step_scalar,
                           rost_step_scalar, max_abs_diff_scalar, "scalar"};
    return k;
}

} // namespace rootb::kern
