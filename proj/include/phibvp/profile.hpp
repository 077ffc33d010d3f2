#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "phibvp/errors.hpp"
#include "phibvp/problem.hpp"
#include "phibvp/quadrature.hpp"
#include "phibvp/rootfind.hpp"
#include "phibvp/solver.hpp"

namespace phibvp {

struct ProfileDiagnostics {
    // Neumann: |y(0)| and |y(T)|.  Periodic: |x(T) - x(0)| and |y(T) - y(0)|.
    double bc_residual_start = 0.0;
    double bc_residual_end = 0.0;
    // max over nodes of the first-integral defect on the matching piece
    double level_set_drift = 0.0;
};

struct SolutionProfile {
    std::vector<double> t, x, y;
    BoundaryCondition bc = BoundaryCondition::Neumann;
    // A Neumann profile of the half-window sub-problem, in shifted time
    // coordinates, awaiting extend_periodic.
    bool half_window = false;
    double tau = 0.0;  // weight switch within this profile's own coordinates
    double T = 0.0;
    ProfileDiagnostics diagnostics;
};

namespace detail {

inline double level_set_drift(const std::vector<double>& t, const std::vector<double>& x,
                              const std::vector<double>& y, const ProblemSpec& spec,
                              double tau, double g_alpha, double g_beta) {
    const WeightSpec& w = spec.weight;
    double drift = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double hy = spec.kernel.H(y[i]);
        const double gx = spec.nonlinearity.G(x[i]);
        const double defect = t[i] <= tau ? hy + w.a_plus * gx - w.a_plus * g_alpha
                                          : hy - w.a_minus * gx + w.a_minus * g_beta;
        drift = std::max(drift, std::abs(defect));
    }
    return drift;
}

}  // namespace detail

// Rebuilds the trajectory on [0, T] from a ReducedSolution by inverting the
// time maps
//   t(x)       = integral from x to alpha of dxi / (-L_h(a+ (G(alpha)-G(xi))))   on [0, tau],
//   t(x) - tau = integral from x to x*   of dxi / (-L_h(a- (G(xi)-G(beta))))     on [tau, T],
// one root-find per node.  This is deliberately quadrature-based so the
// profile stays independent of the RK oracle.  The switch node t = tau is on
// the grid exactly; for periodic specs the result is the half-window Neumann
// profile (pass it to extend_periodic).
inline SolutionProfile reconstruct_neumann(const ReducedSolution& red, const ProblemSpec& spec,
                                           int n_points = 1001,
                                           const QuadratureConfig& q = {}) {
    if (n_points < 5) throw std::invalid_argument("reconstruct_neumann: need n_points >= 5");
    if (!(0.0 < red.beta && red.beta < red.x_star && red.x_star < red.alpha))
        throw contract_error("reconstruct_neumann: ReducedSolution violates beta < x* < alpha");

    const WeightSpec w =
        spec.bc == BoundaryCondition::Periodic ? spec.half_weight() : spec.weight;
    const OperatorKernel& k = spec.kernel;
    const PowerNonlinearity& nl = spec.nonlinearity;

    // elapsed time from state (x, .) forward to where x has fallen to `xq`
    auto time_plus = [&](double xq) {  // from alpha down to xq, a+ piece
        auto f = [&](double, double, double dhi) {
            return 1.0 / (-k.L_h(w.a_plus * nl.G_drop(red.alpha, dhi)));
        };
        return tanh_sinh(f, xq, red.alpha, q);
    };
    auto time_minus = [&](double xq) {  // from x* down to xq, a- piece
        const double off = xq - red.beta;
        auto f = [&](double, double dlo, double) {
            return 1.0 / (-k.L_h(w.a_minus * nl.G_rise(red.beta, dlo + off)));
        };
        return tanh_sinh(f, xq, red.x_star, q);
    };

    int n1 = static_cast<int>(std::lround((n_points - 1) * w.tau / w.T));
    n1 = std::clamp(n1, 1, n_points - 2);
    const int n2 = n_points - 1 - n1;

    SolutionProfile prof;
    prof.bc = BoundaryCondition::Neumann;
    prof.half_window = spec.bc == BoundaryCondition::Periodic;
    prof.tau = w.tau;
    prof.T = w.T;
    prof.t.reserve(static_cast<std::size_t>(n_points));
    prof.x.reserve(static_cast<std::size_t>(n_points));

    const double inv_tol = 1e-13 * std::max(1.0, red.alpha);
    const double total_plus = time_plus(red.x_star);    // tau up to residual
    const double total_minus = time_minus(red.beta);    // T - tau up to residual
    for (int i = 0; i <= n1; ++i) {
        const double t = i == 0 ? 0.0 : (i == n1 ? w.tau : i * w.tau / n1);
        double xv;
        if (i == 0) {
            xv = red.alpha;
        } else if (i == n1) {
            xv = red.x_star;
        } else {
            auto fr = [&](double xq) { return time_plus(xq) - t; };
            const double f_lo = total_plus - t;
            const double f_hi = -t;  // time_plus(alpha) = 0
            if (!(f_lo > 0.0))
                throw contract_error("reconstruct_neumann: a+ time map does not bracket the node");
            xv = brent(fr, red.x_star, red.alpha, f_lo, f_hi, inv_tol);
        }
        prof.t.push_back(t);
        prof.x.push_back(xv);
    }
    for (int j = 1; j <= n2; ++j) {
        const double t = j == n2 ? w.T : w.tau + j * (w.T - w.tau) / n2;
        double xv;
        if (j == n2) {
            xv = red.beta;
        } else {
            const double elapsed = t - w.tau;
            auto fr = [&](double xq) { return time_minus(xq) - elapsed; };
            const double f_lo = total_minus - elapsed;
            const double f_hi = -elapsed;  // time_minus(x*) = 0
            if (!(f_lo > 0.0))
                throw contract_error("reconstruct_neumann: a- time map does not bracket the node");
            xv = brent(fr, red.beta, red.x_star, f_lo, f_hi, inv_tol);
        }
        prof.t.push_back(t);
        prof.x.push_back(xv);
    }

    // y from the level sets; x monotone decreasing keeps both arguments >= 0
    prof.y.resize(prof.t.size());
    for (std::size_t i = 0; i < prof.t.size(); ++i) {
        const double xv = prof.x[i];
        if (prof.t[i] <= w.tau)
            prof.y[i] = -k.H_r_inv(w.a_plus * nl.G_drop(red.alpha, red.alpha - xv));
        else
            prof.y[i] = -k.H_r_inv(w.a_minus * nl.G_rise(red.beta, xv - red.beta));
    }

    prof.diagnostics.bc_residual_start = std::abs(prof.y.front());
    prof.diagnostics.bc_residual_end = std::abs(prof.y.back());
    prof.diagnostics.level_set_drift = detail::level_set_drift(
        prof.t, prof.x, prof.y, spec, w.tau, nl.G(red.alpha), nl.G(red.beta));
    return prof;
}

// T-periodic extension of the half-window Neumann profile, reflecting about
// the maximum point:
//   (x-hat, y-hat)(t) = (x(tau - t), -y(tau - t))
// on the reflected half, then copied T-periodically.  The result lives on
// [0, T] with the maximum of x at t = tau/2 and the minimum at (T + tau)/2.
inline SolutionProfile extend_periodic(const SolutionProfile& half, const ProblemSpec& spec) {
    if (!half.half_window)
        throw contract_error("extend_periodic: input must be the half-window Neumann profile");
    if (spec.bc != BoundaryCondition::Periodic)
        throw contract_error("extend_periodic: spec must be a periodic problem");
    const WeightSpec& w = spec.weight;
    if (std::abs(half.T - 0.5 * w.T) > 1e-12 * w.T ||
        std::abs(half.tau - 0.5 * w.tau) > 1e-12 * w.T)
        throw contract_error("extend_periodic: profile window does not match spec");

    const std::size_t n = half.t.size();
    SolutionProfile full;
    full.bc = BoundaryCondition::Periodic;
    full.half_window = false;
    full.tau = w.tau;
    full.T = w.T;

    // half-window sample i sits at original time u = tau/2 + half.t[i]
    auto u_of = [&](std::size_t i) { return 0.5 * w.tau + half.t[i]; };

    // left reflection: u in [tau/2, tau] -> t = tau - u in [0, tau/2]
    for (std::size_t ir = n; ir-- > 0;) {
        const double u = u_of(ir);
        if (u > w.tau) continue;
        const double t = w.tau - u;
        if (!full.t.empty() && t <= full.t.back()) continue;
        full.t.push_back(t);
        full.x.push_back(half.x[ir]);
        full.y.push_back(-half.y[ir]);
    }
    // middle copy: t = u in [tau/2, (T+tau)/2]
    for (std::size_t i = 0; i < n; ++i) {
        const double t = u_of(i);
        if (!full.t.empty() && t <= full.t.back()) continue;
        full.t.push_back(t);
        full.x.push_back(half.x[i]);
        full.y.push_back(half.y[i]);
    }
    // right reflection shifted by one period: u in [tau, (T+tau)/2] ->
    // t = tau + T - u in [(T+tau)/2, T]
    for (std::size_t ir = n; ir-- > 0;) {
        const double u = u_of(ir);
        if (u < w.tau) continue;
        const double t = w.tau + w.T - u;
        if (!full.t.empty() && t <= full.t.back()) continue;
        full.t.push_back(t);
        full.x.push_back(half.x[ir]);
        full.y.push_back(-half.y[ir]);
    }

    full.diagnostics.bc_residual_start = std::abs(full.x.back() - full.x.front());
    full.diagnostics.bc_residual_end = std::abs(full.y.back() - full.y.front());
    // alpha-hat = x at tau/2, beta-hat = x at (T+tau)/2 anchor the level sets
    const double g_alpha = spec.nonlinearity.G(half.x.front());
    const double g_beta = spec.nonlinearity.G(half.x.back());
    full.diagnostics.level_set_drift = detail::level_set_drift(
        full.t, full.x, full.y, spec, w.tau, g_alpha, g_beta);
    return full;
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// CSV with header "t,x,y", 17 significant digits per value.
inline void write_profile_csv(const SolutionProfile& prof, std::ostream& os) {
    os << "t,x,y\n";
    for (std::size_t i = 0; i < prof.t.size(); ++i)
        os << detail::format_g17(prof.t[i]) << ',' << detail::format_g17(prof.x[i]) << ','
           << detail::format_g17(prof.y[i]) << '\n';
}

}  // namespace phibvp
