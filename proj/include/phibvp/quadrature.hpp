#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "phibvp/errors.hpp"

namespace phibvp {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_levels = 10;  // node density doubles per level
};

namespace detail {

inline void validate(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (cfg.max_levels < 3)
        throw std::invalid_argument("quadrature max_levels must be at least 3");
}

// One tanh-sinh abscissa on [a, b].  Both endpoint distances are produced in
// a cancellation-free form so integrands can evaluate algebraic endpoint
// singularities down to distances ~1e-300.
struct DeNode {
    double x;
    double dist_lo;  // x - a
    double dist_hi;  // b - x
    double weight;   // dx/dt
};

inline bool de_node(double t, double a, double b, DeNode& node) {
    constexpr double half_pi = 1.5707963267948966;
    const double half = 0.5 * (b - a);
    const double u = half_pi * std::sinh(t);
    const double q = std::exp(-2.0 * std::abs(u));
    const double near = half * 2.0 * q / (1.0 + q);  // gap to the endpoint t runs toward
    const double far = half * 2.0 / (1.0 + q);
    // sech^2(u) = 4q / (1+q)^2
    const double w = half * half_pi * std::cosh(t) * 4.0 * q / ((1.0 + q) * (1.0 + q));
    if (near == 0.0 || w == 0.0) return false;  // underflowed into the endpoint
    if (t >= 0.0) {
        node.dist_lo = far;
        node.dist_hi = near;
        node.x = b - near;
    } else {
        node.dist_lo = near;
        node.dist_hi = far;
        node.x = a + near;
    }
    node.weight = w;
    return true;
}

}  // namespace detail

// Tanh-sinh (double-exponential) quadrature on [a, b].  Handles integrable
// algebraic singularities at either endpoint without manual substitution.
// The integrand is called as f(x, x - a, b - x); singular factors should be
// computed from the distance arguments, which stay accurate near the edges.
// Refinement doubles the node density per level until two successive
// estimates agree within tolerance; running out of levels throws
// quadrature_error with the last two estimates.
template <class F>
double tanh_sinh(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    detail::validate(cfg);
    if (!(a <= b)) throw std::invalid_argument("tanh_sinh: requires a <= b");
    if (a == b) return 0.0;

    constexpr double t_max = 6.115;  // past this the transform underflows double

    detail::DeNode nd;
    auto term_at = [&](double t) -> double {
        if (!detail::de_node(t, a, b, nd)) return 0.0;
        const double v = nd.weight * f(nd.x, nd.dist_lo, nd.dist_hi);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "tanh_sinh: integrand sample not finite at x = " << nd.x;
            throw quadrature_error(msg.str(), v, v);
        }
        return v;
    };

    // Level 0: trapezoid at unit spacing.
    double sum = term_at(0.0);
    for (int dir = -1; dir <= 1; dir += 2) {
        int quiet = 0;
        for (int j = 1; j <= static_cast<int>(t_max); ++j) {
            const double term = term_at(dir * static_cast<double>(j));
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
        }
    }

    double h = 1.0;
    double estimate = h * sum;
    double previous = estimate;
    for (int level = 1; level <= cfg.max_levels; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (int dir = -1; dir <= 1; dir += 2) {
            int quiet = 0;
            for (long m = 0;; ++m) {
                const double t = static_cast<double>(2 * m + 1) * h;
                if (t > t_max) break;
                const double term = term_at(dir * t);
                added += term;
                const double scale = std::abs(added) + std::abs(sum);
                if (std::abs(term) <= 1e-17 * scale) {
                    if (++quiet >= 2) break;
                } else {
                    quiet = 0;
                }
            }
        }
        sum += added;
        previous = estimate;
        estimate = 0.5 * estimate + h * added;
        if (level >= 2 &&
            std::abs(estimate - previous) <=
                std::max(cfg.abs_tol, cfg.rel_tol * std::abs(estimate)))
            return estimate;
    }
    std::ostringstream msg;
    msg << "tanh_sinh: no convergence after " << cfg.max_levels
        << " levels (last estimates " << previous << ", " << estimate << ")";
    throw quadrature_error(msg.str(), previous, estimate);
}

// Oriented variant: integrates from `from` to `to`, negating when the limits
// are reversed.
template <class F>
double tanh_sinh_oriented(F&& f, double from, double to, const QuadratureConfig& cfg = {}) {
    if (from <= to) return tanh_sinh(f, from, to, cfg);
    return -tanh_sinh(f, to, from, cfg);
}

}  // namespace phibvp
