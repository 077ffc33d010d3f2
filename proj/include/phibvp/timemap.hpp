#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "phibvp/errors.hpp"
#include "phibvp/problem.hpp"
#include "phibvp/quadrature.hpp"

namespace phibvp {

// Admissible interval for rho = a_minus G(beta) / (a_plus G(alpha)).
// Cases (i)/(ii) live below a_minus/a_plus, case (iv) above it.
enum class RhoSide { BelowRatio, AboveRatio };

struct RhoDomain {
    double lower;
    double upper;  // +inf on the AboveRatio side
    RhoSide side;

    bool contains(double rho) const { return rho > lower && rho < upper; }
};

inline RhoDomain rho_domain(const ProblemSpec& spec) {
    const double r = spec.weight.ratio();
    if (spec.nonlinearity.gamma() > -1.0)
        return RhoDomain{0.0, r, RhoSide::BelowRatio};
    return RhoDomain{r, std::numeric_limits<double>::infinity(), RhoSide::AboveRatio};
}

namespace detail {

inline double require_power_p(const ProblemSpec& spec) {
    if (!spec.kernel.power_type())
        throw unsupported_error(
            "the (omega, rho) reduction requires the linear or p-Laplacian kernel; "
            "use generic_M for the Minkowski operator");
    return spec.kernel.power_p();
}

// -L_h(xi) = lead_coeff(p) * xi^{1/p} for the homogeneous kernels
inline double lead_coeff(double p) { return std::pow(p / (p - 1.0), 1.0 / p); }

}  // namespace detail

// I1(rho) = integral from mu(rho+1) to 1 of
//             dxi / (|a+ - a+ xi|^{1/p} |xi|^{gamma/(gamma+1)}).
// Oriented as written: the lower limit exceeds 1 when gamma < -1, so the
// value carries sign(gamma + 1).
inline double integral_I1(double rho, const ProblemSpec& spec, const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    if (!(rho > 0.0)) throw std::domain_error("integral_I1: rho must be positive");
    const WeightSpec& w = spec.weight;
    const double ge = spec.nonlinearity.exponent_ratio();
    const double m = w.mu() * (rho + 1.0);
    const double inv_p = 1.0 / p;

    double a = m, b = 1.0, sgn = 1.0;
    bool one_is_upper = true;
    if (m > 1.0) {
        a = 1.0;
        b = m;
        sgn = -1.0;
        one_is_upper = false;
    }
    auto f = [&](double x, double dlo, double dhi) {
        const double dist_one = one_is_upper ? dhi : dlo;  // |1 - xi|
        return 1.0 / (detail::pow_abs(w.a_plus * dist_one, inv_p) * detail::pow_abs(x, ge));
    };
    return sgn * tanh_sinh(f, a, b, q);
}

// I2(rho) = integral from a+/a- to mu(rho+1)/rho of
//             dxi / (|a- xi - a+|^{1/p} |xi|^{gamma/(gamma+1)}).
// Singular endpoint at xi = a+/a-; sign matches sign(gamma + 1).
inline double integral_I2(double rho, const ProblemSpec& spec, const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    if (!(rho > 0.0)) throw std::domain_error("integral_I2: rho must be positive");
    const WeightSpec& w = spec.weight;
    const double ge = spec.nonlinearity.exponent_ratio();
    const double edge = w.a_plus / w.a_minus;  // singular abscissa
    const double other = w.mu() * (rho + 1.0) / rho;
    const double inv_p = 1.0 / p;

    double a = edge, b = other, sgn = 1.0;
    bool edge_is_lower = true;
    if (other < edge) {
        a = other;
        b = edge;
        sgn = -1.0;
        edge_is_lower = false;
    }
    auto f = [&](double x, double dlo, double dhi) {
        const double dist_edge = edge_is_lower ? dlo : dhi;  // |xi - a+/a-|
        return 1.0 / (detail::pow_abs(w.a_minus * dist_edge, inv_p) * detail::pow_abs(x, ge));
    };
    return sgn * tanh_sinh(f, a, b, q);
}

// Closed form of dI1/drho (only the lower limit moves):
//   I1'(rho) = -mu^{1 - gamma/(gamma+1) - 1/p}
//              / (|a- - a+ rho|^{1/p} (rho+1)^{gamma/(gamma+1)}).
// Negative on both admissible intervals.
inline double integral_I1_derivative(double rho, const ProblemSpec& spec) {
    const double p = detail::require_power_p(spec);
    const WeightSpec& w = spec.weight;
    const double ge = spec.nonlinearity.exponent_ratio();
    const double mu = w.mu();
    return -std::pow(mu, 1.0 - ge - 1.0 / p) /
           (detail::pow_abs(w.a_minus - w.a_plus * rho, 1.0 / p) *
            detail::pow_abs(rho + 1.0, ge));
}

// F_p(rho) = rho^{-1 + gamma/(gamma+1) + 1/p} I1(rho)/I2(rho): the quotient
// of the two reduced equations.  Strictly positive on the interior of the
// rho-domain.
inline double F_quotient(double rho, const ProblemSpec& spec, const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    const double ratio = spec.weight.ratio();
    if (std::abs(rho - ratio) <= 1e-12)
        throw std::domain_error(
            "F_quotient: rho within 1e-12 of a-/a+; use F_limits for the boundary value");
    if (!rho_domain(spec).contains(rho))
        throw std::domain_error("F_quotient: rho outside the admissible interval");
    const double e = -1.0 + spec.nonlinearity.exponent_ratio() + 1.0 / p;
    return std::pow(rho, e) * integral_I1(rho, spec, q) / integral_I2(rho, spec, q);
}

// K0(gamma): the rho -> 0+ limit of F_2 for gamma in ]-1, 1[ (p = 2 only),
//   K0 = (1-gamma)/(2(gamma+1)) ((a+ + a-)/a+)^{(1-gamma)/(2(gamma+1))}
//        sqrt(a-/a+) * integral from a+/(a+ + a-) to 1 of
//        dxi / ((1 - xi)^{1/2} |xi|^{gamma/(gamma+1)}).
inline double K0(double gamma, double a_plus, double a_minus, const QuadratureConfig& q = {}) {
    if (!(gamma > -1.0 && gamma < 1.0))
        throw std::domain_error("K0 is defined for gamma in ]-1, 1[");
    if (!(a_plus > 0.0) || !(a_minus > 0.0))
        throw std::invalid_argument("K0: weight magnitudes must be positive");
    const double ge = gamma / (gamma + 1.0);
    const double mu = a_plus / (a_plus + a_minus);
    auto f = [&](double x, double, double dhi) {
        return 1.0 / (std::sqrt(dhi) * detail::pow_abs(x, ge));
    };
    const double integral = tanh_sinh(f, mu, 1.0, q);
    const double e = (1.0 - gamma) / (2.0 * (gamma + 1.0));
    return e * std::pow((a_plus + a_minus) / a_plus, e) * std::sqrt(a_minus / a_plus) *
           integral;
}

struct FLimits {
    double at_ratio;    // limit of F as rho -> a-/a+ (always a-/a+)
    double at_far_end;  // limit at the other end of the rho-domain; may be +inf
};

// Analytic endpoint limits of F_p over the rho-domain.  The far end is
//   +inf            for gamma < -1,
//   a-/a+           for gamma = 0 (F is constant),
//   0               for gamma >= p-1,
//   K0(gamma)       for p = 2 and gamma in ]-1, 1[.
// For p != 2 with gamma strictly between -1 and p-1 no closed form is known
// here and the call is rejected.
inline FLimits F_limits(const ProblemSpec& spec, const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    const double gamma = spec.gamma();
    const double ratio = spec.weight.ratio();
    double far;
    if (gamma < -1.0) {
        far = std::numeric_limits<double>::infinity();
    } else if (gamma == 0.0) {
        far = ratio;
    } else if (gamma >= p - 1.0) {
        far = 0.0;
    } else if (p == 2.0) {
        far = K0(gamma, spec.weight.a_plus, spec.weight.a_minus, q);
    } else {
        throw unsupported_error(
            "the rho -> 0 limit of F_p is only available in closed form for p = 2");
    }
    return FLimits{ratio, far};
}

struct MPair {
    double M_I;
    double M_II;
};

// The generic time maps over O = {(omega, sigma) : omega > sigma}, both in
// the range of G:
//   M_I  = integral from mu omega + (1-mu) sigma to omega of
//            dtheta / (-L_h(a+ (omega - theta)) L_g(theta)),
//   M_II = integral from sigma to mu omega + (1-mu) sigma of
//            dtheta / (-L_h(a- (theta - sigma)) L_g(theta)).
// Works for any kernel, including Minkowski.
inline MPair generic_M(double omega, double sigma, const ProblemSpec& spec,
                       const QuadratureConfig& q = {}) {
    if (!(omega > sigma))
        throw std::domain_error("generic_M: (omega, sigma) must satisfy omega > sigma");
    const bool positive_range = spec.nonlinearity.gamma() > -1.0;
    if (positive_range ? !(sigma > 0.0) : !(omega < 0.0))
        throw std::domain_error("generic_M: omega and sigma must lie in the range of G");

    const WeightSpec& w = spec.weight;
    const OperatorKernel& k = spec.kernel;
    const PowerNonlinearity& nl = spec.nonlinearity;
    const double mu = w.mu();
    const double gx = mu * omega + (1.0 - mu) * sigma;  // G(x*)

    auto f1 = [&](double th, double, double dhi) {
        return 1.0 / (-k.L_h(w.a_plus * dhi) * nl.L_g(th));
    };
    auto f2 = [&](double th, double dlo, double) {
        return 1.0 / (-k.L_h(w.a_minus * dlo) * nl.L_g(th));
    };
    return MPair{tanh_sinh(f1, gx, omega, q), tanh_sinh(f2, sigma, gx, q)};
}

}  // namespace phibvp
