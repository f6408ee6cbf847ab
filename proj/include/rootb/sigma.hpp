#pragma once

#include "rootb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rootb {

/// Diffusion coefficient sigma(t,x). The common cases (constant, identity,
/// piecewise-linear table in x) are tag-dispatched so the per-step evaluation
/// in the Monte Carlo loops stays cheap; arbitrary callables are supported
/// through the Custom kind.
class Sigma {
public:
    static Sigma constant(double c) {
        Sigma s;
        s.kind_ = Kind::Constant;
        s.c_ = c;
        s.id_ = "constant:" + std::to_string(c);
        return s;
    }

    /// sigma(t,x) = x (geometric Brownian motion).
    static Sigma identity() {
        Sigma s;
        s.kind_ = Kind::Identity;
        s.id_ = "identity";
        return s;
    }

    /// Piecewise-linear in x, constant in t; clamped outside the table range.
    static Sigma table(std::vector<double> xs, std::vector<double> vals) {
        if (xs.size() != vals.size() || xs.size() < 2)
            throw ConfigError("sigma table needs >= 2 matching (x, sigma) rows");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i] < xs[i + 1])) throw ConfigError("sigma table x must be increasing");
        Sigma s;
        s.kind_ = Kind::Table;
        s.xs_ = std::move(xs);
        s.vals_ = std::move(vals);
        s.id_ = "table[" + std::to_string(s.xs_.size()) + "]";
        return s;
    }

    static Sigma custom(std::function<double(double, double)> fn, std::string id = "custom") {
        Sigma s;
        s.kind_ = Kind::Custom;
        s.fn_ = std::move(fn);
        s.id_ = std::move(id);
        return s;
    }

    double operator()(double t, double x) const {
        switch (kind_) {
        case Kind::Constant: return c_;
        case Kind::Identity: return x;
        case Kind::Table: {
            if (x <= xs_.front()) return vals_.front();
            if (x >= xs_.back()) return vals_.back();
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
            const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            return vals_[i - 1] + w * (vals_[i] - vals_[i - 1]);
        }
        case Kind::Custom: return fn_(t, x);
        }
        return 0.0;
    }

    /// sup of sigma^2 over [a,b] (sampled for table/custom kinds).
    double sup_sq(double a, double b) const {
        switch (kind_) {
        case Kind::Constant: return c_ * c_;
        case Kind::Identity: return std::max(a * a, b * b);
        default: {
            double m = 0.0;
            const int n = 512;
            for (int i = 0; i <= n; ++i) {
                const double x = a + (b - a) * i / n;
                const double s = (*this)(0.0, x);
                m = std::max(m, s * s);
            }
            return m;
        }
        }
    }

    bool time_dependent() const { return kind_ == Kind::Custom; }
    const std::string& id() const { return id_; }

private:
    enum class Kind { Constant, Identity, Table, Custom };
    Sigma() = default;

    Kind kind_ = Kind::Constant;
    double c_ = 1.0;
    std::vector<double> xs_, vals_;
    std::function<double(double, double)> fn_;
    std::string id_;
};

} // namespace rootb
