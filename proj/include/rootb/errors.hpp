#pragma once

#include <stdexcept>
#include <string>

namespace rootb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFiniteMoment : Error {
    explicit NonFiniteMoment(const std::string& msg) : Error("NonFiniteMoment: " + msg) {}
};

struct MeanMismatch : Error {
    double mean_mu, mean_nu;
    MeanMismatch(double m1, double m2)
        : Error("MeanMismatch: means differ (" + std::to_string(m1) + " vs " + std::to_string(m2) + ")"),
          mean_mu(m1), mean_nu(m2) {}
};

struct OrderViolation : Error {
    double witness;
    explicit OrderViolation(double x)
        : Error("OrderViolation: convex order fails at x = " + std::to_string(x)), witness(x) {}
};

struct CflViolation : Error {
    double ratio;
    explicit CflViolation(double r)
        : Error("CflViolation: dt*sigma^2/dx^2 = " + std::to_string(r) + " exceeds 1"), ratio(r) {}
};

struct ArbitrageDetected : Error {
    std::size_t index;
    ArbitrageDetected(std::size_t i, const std::string& what)
        : Error("ArbitrageDetected at strike index " + std::to_string(i) + ": " + what), index(i) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error("GridMismatch: " + msg) {}
};

struct EmptySample : Error {
    EmptySample() : Error("EmptySample: no samples to evaluate") {}
};

struct TooManyUnstopped : Error {
    double fraction;
    explicit TooManyUnstopped(double f)
        : Error("TooManyUnstopped: unstopped fraction " + std::to_string(f) + " >= 0.01"), fraction(f) {}
};

struct NoConvergence : Error {
    int sweeps;
    explicit NoConvergence(int s)
        : Error("NoConvergence: atom masses not matched after " + std::to_string(s) + " sweeps"), sweeps(s) {}
};

struct RegressionSingular : Error {
    RegressionSingular() : Error("RegressionSingular: degenerate design matrix, widen basis or cloud") {}
};

struct SupportViolation : Error {
    explicit SupportViolation(const std::string& msg) : Error("SupportViolation: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("ConfigError: " + msg) {}
};

} // namespace rootb
