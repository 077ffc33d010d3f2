#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phibvp/errors.hpp"
#include "phibvp/problem.hpp"
#include "phibvp/rootfind.hpp"
#include "phibvp/timemap.hpp"

namespace phibvp {

enum class ExistenceStatus { UniqueExists, NoneExists, EigenvalueDegenerate, OutsideTheory };

// Record of the inequality that was actually checked, so callers (and the
// JSON report) can show their work.
struct ConditionReport {
    std::string rule;            // human-readable statement of the test
    double abar = 0.0;           // integral of a over [0, T]
    double ratio_target = 0.0;   // tau/(T - tau)
    double ratio_weight = 0.0;   // a-/a+
    std::optional<double> k0;    // K0(gamma) when it entered the check
    std::optional<bool> exists;  // set when the theory decides existence
    bool holds = false;          // whether the stated inequality holds
};

struct ExistenceVerdict {
    ExistenceStatus status;
    ConditionReport report;
};

// Existence / uniqueness classification.
//   - gamma <= (1-2p)/(p-1) or gamma > p-1: unique solution iff gamma*abar < 0.
//   - gamma = p-1: eigenvalue case.
//   - p = 2, gamma in ]0,1[:  solution iff K0(gamma) < tau/(T-tau) < a-/a+,
//     and it is unique.
//   - p = 2, gamma in ]-1,0[: solution if a-/a+ < tau/(T-tau) < K0(gamma);
//     uniqueness open.
//   - p = 2, gamma in ]-3,-1[: solution iff abar > 0; uniqueness open.
//   - otherwise only the necessary sign condition gamma*abar < 0 is applied.
inline ExistenceVerdict classify_existence(const ProblemSpec& spec) {
    const WeightSpec& w = spec.weight;
    ConditionReport rep;
    rep.abar = w.abar();
    rep.ratio_target = w.target_ratio();
    rep.ratio_weight = w.ratio();

    if (!spec.kernel.power_type()) {
        rep.rule = "no existence/uniqueness theory for the Minkowski kernel; "
                   "generic_M residual evaluation only";
        return {ExistenceStatus::OutsideTheory, rep};
    }
    const double p = spec.kernel.power_p();
    const double gamma = spec.gamma();

    if (gamma == p - 1.0) {
        rep.rule = "gamma = p-1 (homogeneous): solvable only at the principal eigenvalue";
        return {ExistenceStatus::EigenvalueDegenerate, rep};
    }
    if (gamma == 0.0) {
        rep.rule = "gamma = 0: solutions exist only when abar = 0, and then form a "
                   "one-parameter family";
        rep.holds = std::abs(rep.abar) <= 1e-14 * (w.a_plus * w.tau + w.a_minus * (w.T - w.tau));
        rep.exists = rep.holds;
        return {ExistenceStatus::OutsideTheory, rep};
    }

    const double low_edge = (1.0 - 2.0 * p) / (p - 1.0);
    if (gamma <= low_edge || gamma > p - 1.0) {
        rep.rule = "gamma * abar < 0 (unique solution iff it holds)";
        rep.holds = gamma * rep.abar < 0.0;
        rep.exists = rep.holds;
        return {rep.holds ? ExistenceStatus::UniqueExists : ExistenceStatus::NoneExists, rep};
    }

    if (p == 2.0 && gamma > 0.0 && gamma < 1.0) {
        const double k0 = K0(gamma, w.a_plus, w.a_minus);
        rep.k0 = k0;
        rep.rule = "K0(gamma) < tau/(T-tau) < a-/a+ (unique solution iff it holds)";
        rep.holds = k0 < rep.ratio_target && rep.ratio_target < rep.ratio_weight;
        rep.exists = rep.holds;
        return {rep.holds ? ExistenceStatus::UniqueExists : ExistenceStatus::NoneExists, rep};
    }
    if (p == 2.0 && gamma > -1.0 && gamma < 0.0) {
        const double k0 = K0(gamma, w.a_plus, w.a_minus);
        rep.k0 = k0;
        rep.rule = "a-/a+ < tau/(T-tau) < K0(gamma) (sufficient for existence; "
                   "uniqueness open)";
        rep.holds = rep.ratio_weight < rep.ratio_target && rep.ratio_target < k0;
        if (rep.holds) rep.exists = true;
        return {ExistenceStatus::OutsideTheory, rep};
    }
    if (p == 2.0 && gamma > -3.0 && gamma < -1.0) {
        rep.rule = "abar > 0 (solution iff it holds; uniqueness open)";
        rep.holds = rep.abar > 0.0;
        rep.exists = rep.holds;
        return {ExistenceStatus::OutsideTheory, rep};
    }

    // p != 2 inside the uncovered gamma window: only the necessary sign
    // condition from integrating the equation against 1/g is available.
    rep.rule = "necessary condition gamma * abar < 0 (no sufficient criterion for "
               "p != 2 with gamma in the uncovered range)";
    rep.holds = gamma * rep.abar < 0.0;
    if (!rep.holds) rep.exists = false;
    return {ExistenceStatus::OutsideTheory, rep};
}

// Solution of the reduced two-equation system, with the phase-plane data
// recovered from (omega, rho).
struct ReducedSolution {
    double rho = 0.0;
    double omega = 0.0;  // G(alpha); sign(omega) = sign(gamma + 1)
    double sigma = 0.0;  // G(beta)
    double alpha = 0.0;
    double beta = 0.0;
    double x_star = 0.0;
    double y_star = 0.0;           // <= 0
    double residual_first = 0.0;   // M_I(omega, sigma) - target_first
    double residual_second = 0.0;  // M_II(omega, sigma) - target_second
    double target_first = 0.0;
    double target_second = 0.0;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Recover |omega| from the first reduced equation
//   (|gamma+1|^{-gamma/(gamma+1)} / lead_coeff(p)) omega |omega|^{-gamma/(gamma+1)-1/p} I1 = target,
// which is a pure power in |omega| with exponent 1/(gamma+1) - 1/p.
inline double omega_from_first_equation(double i1_hat, double target, double p, double gamma) {
    const double c = std::pow(std::abs(gamma + 1.0), -gamma / (gamma + 1.0));
    const double expo = 1.0 / (gamma + 1.0) - 1.0 / p;
    const double mag =
        std::pow(target * lead_coeff(p) / (c * std::abs(i1_hat)), 1.0 / expo);
    return gamma > -1.0 ? mag : -mag;
}

// Root of F_quotient(rho) = tau/(T-tau) over the rho-domain.  In the
// monotonicity regimes the bracket is grown against the analytic limits; in
// the open regimes a log-spaced scan locates the first sign change.  Bisection
// runs the bracket down to 1e-12.
inline double find_rho_hat(const ProblemSpec& spec, const QuadratureConfig& q) {
    const double p = spec.kernel.power_p();
    const double gamma = spec.gamma();
    const double ratio = spec.weight.ratio();
    const double target = spec.weight.target_ratio();
    auto fval = [&](double r) { return F_quotient(r, spec, q) - target; };
    const bool monotone_regime =
        gamma <= (1.0 - 2.0 * p) / (p - 1.0) || gamma >= p - 1.0;

    constexpr double rho_tol = 1e-12;
    if (monotone_regime && gamma > -1.0) {
        // F increases from 0 to a-/a+ over ]0, a-/a+[
        if (!(target < ratio))
            throw no_solution_error("no solution: tau/(T-tau) = " + fmt(target) +
                                    " is not below a-/a+ = " + fmt(ratio) +
                                    ", but F ranges in ]0, a-/a+[ for gamma >= p-1");
        double lo = 0.5 * ratio;
        double flo = fval(lo);
        for (int guard = 0; flo >= 0.0 && guard < 1100; ++guard) {
            lo *= 0.5;
            flo = fval(lo);
        }
        if (flo >= 0.0)
            throw no_solution_error("no solution: F stays above tau/(T-tau) = " + fmt(target) +
                                    " arbitrarily close to rho = 0");
        double gap = 1e-3 * ratio;
        double hi = ratio - gap;
        double fhi = fval(hi);
        while (fhi <= 0.0 && gap > 64.0 * rho_tol) {
            gap *= 0.5;
            hi = ratio - gap;
            fhi = fval(hi);
        }
        if (fhi <= 0.0)
            throw no_solution_error("no solution: tau/(T-tau) = " + fmt(target) +
                                    " sits within quadrature distance of the supremum a-/a+ = " +
                                    fmt(ratio));
        return bisect(fval, lo, hi, flo, fhi, rho_tol);
    }
    if (monotone_regime) {
        // gamma <= (1-2p)/(p-1): F increases from a-/a+ to +inf over ]a-/a+, +inf[
        if (!(target > ratio))
            throw no_solution_error("no solution: tau/(T-tau) = " + fmt(target) +
                                    " is not above a-/a+ = " + fmt(ratio) +
                                    ", but F ranges in ]a-/a+, +inf[ for gamma <= (1-2p)/(p-1)");
        double gap = 1e-3 * ratio;
        double lo = ratio + gap;
        double flo = fval(lo);
        while (flo >= 0.0 && gap > 64.0 * rho_tol) {
            gap *= 0.5;
            lo = ratio + gap;
            flo = fval(lo);
        }
        if (flo >= 0.0)
            throw no_solution_error("no solution: tau/(T-tau) = " + fmt(target) +
                                    " sits within quadrature distance of the infimum a-/a+ = " +
                                    fmt(ratio));
        double hi = lo;
        double fhi = flo;
        for (int guard = 0; fhi <= 0.0 && guard < 400; ++guard) {
            hi *= 2.0;
            fhi = fval(hi);
        }
        if (fhi <= 0.0)
            throw no_solution_error("no solution: F never reached tau/(T-tau) = " + fmt(target) +
                                    " while growing the bracket");
        return bisect(fval, lo, hi, flo, fhi, rho_tol);
    }

    // Open regime: no monotonicity assumed.  Log-spaced scan, first crossing.
    const RhoDomain dom = rho_domain(spec);
    const double lo_edge =
        dom.side == RhoSide::BelowRatio ? 1e-6 * ratio : ratio * (1.0 + 1e-6);
    const double hi_edge =
        dom.side == RhoSide::BelowRatio ? ratio * (1.0 - 1e-6) : ratio * 1e4;
    const int n = 400;
    double prev_rho = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        const double r = lo_edge * std::pow(hi_edge / lo_edge, i / (n - 1.0));
        double fr;
        try {
            fr = fval(r);
        } catch (const quadrature_error&) {
            have_prev = false;
            continue;
        }
        if (fr == 0.0) return r;
        if (have_prev && (fr > 0.0) != (prev_f > 0.0))
            return bisect(fval, prev_rho, r, prev_f, fr, rho_tol);
        prev_rho = r;
        prev_f = fr;
        have_prev = true;
    }
    throw no_solution_error("no solution: F - tau/(T-tau) has no sign change over the scanned "
                            "rho window [" +
                            fmt(lo_edge) + ", " + fmt(hi_edge) + "]");
}

}  // namespace detail

// Solves the reduced system for (omega, rho) and recovers
// (alpha, beta, x*, y*).  For periodic problems the targets are halved and
// the returned data describes the Neumann sub-problem on the half-window.
// Residuals are evaluated through generic_M, an independent quadrature route.
inline ReducedSolution solve_reduced(const ProblemSpec& spec, const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    const double gamma = spec.gamma();
    if (gamma == 0.0)
        throw degenerate_family_error(
            "gamma = 0: the quotient equation does not depend on rho; solutions exist only "
            "when tau/(T-tau) = a-/a+ and then form a one-parameter family");
    if (gamma == p - 1.0)
        throw eigenvalue_degenerate_error(
            "gamma = p-1 is the homogeneous (eigenvalue) case: the first reduced equation "
            "determines the eigenvalue, not omega");

    const double t1 = spec.target_first();
    const double t2 = spec.target_second();
    const double rho_hat = detail::find_rho_hat(spec, q);
    const double i1_hat = integral_I1(rho_hat, spec, q);
    const double omega = detail::omega_from_first_equation(i1_hat, t1, p, gamma);

    const WeightSpec& w = spec.weight;
    const PowerNonlinearity& nl = spec.nonlinearity;
    const double sigma = (w.a_plus / w.a_minus) * omega * rho_hat;
    const double gx = w.mu() * omega + (1.0 - w.mu()) * sigma;

    ReducedSolution out;
    out.rho = rho_hat;
    out.omega = omega;
    out.sigma = sigma;
    out.alpha = nl.G_inv(omega);
    out.beta = nl.G_inv(sigma);
    out.x_star = nl.G_inv(gx);
    out.y_star = spec.kernel.H_l_inv(w.a_plus * (omega - gx));
    out.target_first = t1;
    out.target_second = t2;
    const MPair m = generic_M(omega, sigma, spec, q);
    out.residual_first = m.M_I - t1;
    out.residual_second = m.M_II - t2;

    // Integrating the equation against 1/g forces sign(abar) = -sign(gamma)
    // on any Neumann/periodic solution; a violation here means the root
    // finder produced garbage.
    if (gamma * w.abar() >= 0.0)
        throw contract_error("solve_reduced: recovered a solution although gamma * abar >= 0");
    return out;
}

struct CrossingReport {
    int count = 0;
    std::vector<double> crossings;  // refined rho values, ascending
    int skipped = 0;                // grid points lost to quadrature failures
};

// Counts sign changes of F(rho) - tau/(T-tau) across a log-spaced grid of the
// rho-domain, refining each one by bisection.  No monotonicity is assumed, so
// this doubles as a brute-force uniqueness probe.
inline CrossingReport count_solutions(const ProblemSpec& spec, int grid_size,
                                      const QuadratureConfig& q = {},
                                      std::optional<double> rho_min = {},
                                      std::optional<double> rho_max = {}) {
    detail::require_power_p(spec);
    const double gamma = spec.gamma();
    if (gamma == 0.0)
        throw std::invalid_argument(
            "count_solutions: F is constant in rho for gamma = 0; crossings are not isolated");
    if (grid_size < 8) throw std::invalid_argument("count_solutions: grid_size must be >= 8");

    const double ratio = spec.weight.ratio();
    const double target = spec.weight.target_ratio();
    const RhoDomain dom = rho_domain(spec);
    const double lo_edge = rho_min.value_or(
        dom.side == RhoSide::BelowRatio ? 1e-6 * ratio : ratio * (1.0 + 1e-6));
    const double hi_edge = rho_max.value_or(
        dom.side == RhoSide::BelowRatio ? ratio * (1.0 - 1e-6) : ratio * 1e4);
    if (!(dom.contains(lo_edge) && dom.contains(hi_edge) && lo_edge < hi_edge))
        throw std::domain_error("count_solutions: scan window must lie inside the rho-domain");

    auto fval = [&](double r) { return F_quotient(r, spec, q) - target; };

    CrossingReport rep;
    double prev_rho = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i < grid_size; ++i) {
        const double r = lo_edge * std::pow(hi_edge / lo_edge, i / (grid_size - 1.0));
        double fr;
        try {
            fr = fval(r);
        } catch (const quadrature_error&) {
            ++rep.skipped;
            have_prev = false;
            continue;
        }
        if (fr == 0.0) {
            rep.crossings.push_back(r);
            have_prev = false;
            continue;
        }
        if (have_prev && (fr > 0.0) != (prev_f > 0.0))
            rep.crossings.push_back(bisect(fval, prev_rho, r, prev_f, fr, 1e-12));
        prev_rho = r;
        prev_f = fr;
        have_prev = true;
    }
    rep.count = static_cast<int>(rep.crossings.size());
    return rep;
}

struct BifurcationPoint {
    double lambda = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    bool omega_free = false;  // gamma = 1: any omega solves at lambda_1
};

// Bifurcation data for u'' + lambda a(t) u^gamma = 0 (p = 2 only):
//   gamma != 1: rho-hat is fixed by the quotient equation and
//     omega(lambda) = (sqrt(2) tau / (|gamma+1|^{-gamma/(gamma+1)} I1(rho-hat)))^{2(gamma+1)/(1-gamma)}
//                     * lambda^{(gamma+1)/(1-gamma)},
//     one point per requested lambda.
//   gamma = 1: returns the single principal eigenvalue
//     lambda_1 = (I1(rho-hat)/(2 tau))^2 with omega free.
inline std::vector<BifurcationPoint> bifurcation_curve(const ProblemSpec& spec,
                                                       const std::vector<double>& lambdas,
                                                       const QuadratureConfig& q = {}) {
    const double p = detail::require_power_p(spec);
    if (p != 2.0)
        throw unsupported_error("bifurcation_curve is implemented for p = 2 only");
    const double gamma = spec.gamma();
    if (!(gamma <= -3.0 || gamma >= 1.0))
        throw std::domain_error(
            "bifurcation_curve needs gamma <= -3 or gamma >= 1 so rho-hat is unique");

    const double rho_hat = detail::find_rho_hat(spec, q);
    const double i1_hat = integral_I1(rho_hat, spec, q);
    const double tau = spec.weight.tau;

    if (gamma == 1.0) {
        const double lam1 = std::pow(i1_hat / (2.0 * tau), 2.0);
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        return {BifurcationPoint{lam1, nan, nan, true}};
    }
    std::vector<BifurcationPoint> out;
    out.reserve(lambdas.size());
    for (double lam : lambdas) {
        if (!(lam > 0.0))
            throw std::invalid_argument("bifurcation_curve: lambda values must be positive");
        // the lambda-system's first equation has target sqrt(lambda) * tau
        const double omega =
            detail::omega_from_first_equation(i1_hat, std::sqrt(lam) * tau, 2.0, gamma);
        out.push_back(BifurcationPoint{lam, omega, spec.nonlinearity.G_inv(omega), false});
    }
    return out;
}

}  // namespace phibvp
