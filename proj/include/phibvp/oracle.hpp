#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "phibvp/errors.hpp"
#include "phibvp/problem.hpp"

namespace phibvp {

// Trajectory of the planar system x' = h(y), y' = -a(t) g(x) started at
// (alpha, 0), integrated with fixed-step classical RK4.  The step count is
// chosen per piece so the weight switch at t = tau is landed on exactly.
struct ShootResult {
    std::vector<double> t, x, y;  // recorded samples, one per accepted step
    double alpha = 0.0;
    double t_end = 0.0;  // T, or the time integration stopped
    double x_end = 0.0;
    double y_end = 0.0;
    bool hit_singularity = false;  // x fell below 1e-9, blew up, or (Minkowski)
                                   // |u'| reached 1 - 1e-12

    double residual_neumann() const { return y_end; }
    std::pair<double, double> residual_periodic() const { return {x_end - alpha, y_end}; }
};

namespace detail {

struct PlanarState {
    double x;
    double y;
};

template <class Deriv>
inline PlanarState rk4_step(const PlanarState& s, double h, Deriv&& d) {
    const PlanarState k1 = d(s);
    const PlanarState k2 = d({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
    const PlanarState k3 = d({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
    const PlanarState k4 = d({s.x + h * k3.x, s.y + h * k3.y});
    return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

}  // namespace detail

inline ShootResult shoot(double alpha, const ProblemSpec& spec, double step,
                         bool record = true) {
    if (!(alpha > 0.0)) throw std::invalid_argument("shoot: alpha must be positive");
    if (!(step > 0.0)) throw std::invalid_argument("shoot: step must be positive");
    const WeightSpec& w = spec.weight;
    const OperatorKernel& k = spec.kernel;
    const PowerNonlinearity& nl = spec.nonlinearity;
    const bool minkowski = k.kind() == KernelKind::Minkowski;

    ShootResult out;
    out.alpha = alpha;
    detail::PlanarState s{alpha, 0.0};

    auto singular = [&](const detail::PlanarState& st) {
        if (!std::isfinite(st.x) || !std::isfinite(st.y)) return true;
        if (!(st.x > 1e-9)) return true;
        if (minkowski && std::abs(k.h(st.y)) >= 1.0 - 1e-12) return true;
        return false;
    };
    auto push = [&](double tt) {
        if (record) {
            out.t.push_back(tt);
            out.x.push_back(s.x);
            out.y.push_back(s.y);
        }
    };
    auto finish = [&](double tt) {
        out.t_end = tt;
        out.x_end = s.x;
        out.y_end = s.y;
    };

    push(0.0);
    for (int piece = 0; piece < 2; ++piece) {
        const double sign_a = piece == 0 ? -w.a_plus : w.a_minus;  // y' = sign_a g(x)
        const double t0 = piece == 0 ? 0.0 : w.tau;
        const double t1 = piece == 0 ? w.tau : w.T;
        const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / step - 1e-9)));
        const double h = (t1 - t0) / static_cast<double>(n);
        auto deriv = [&](const detail::PlanarState& st) {
            return detail::PlanarState{k.h(st.y), sign_a * nl.g(st.x)};
        };
        for (long i = 0; i < n; ++i) {
            s = detail::rk4_step(s, h, deriv);
            const double tt = (i + 1 == n) ? t1 : t0 + (i + 1) * h;
            if (singular(s)) {
                out.hit_singularity = true;
                finish(tt);
                return out;
            }
            push(tt);
        }
    }
    finish(w.T);
    return out;
}

struct PlanarSample {
    double t;
    double x;
    double y;
};

// Integrates from (alpha, 0) and samples the trajectory at the given times
// (ascending, within [0, T]).  Substeps between consecutive sample times keep
// the RK step at or below max_step, and the weight switch is landed on
// exactly, so the samples align with an externally chosen grid.
inline std::vector<PlanarSample> oracle_at_times(double alpha, const ProblemSpec& spec,
                                                 const std::vector<double>& times,
                                                 double max_step) {
    if (!(alpha > 0.0)) throw std::invalid_argument("oracle_at_times: alpha must be positive");
    if (!(max_step > 0.0)) throw std::invalid_argument("oracle_at_times: max_step must be positive");
    const WeightSpec& w = spec.weight;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || times[i] > w.T || (i > 0 && times[i] <= times[i - 1]))
            throw std::invalid_argument("oracle_at_times: times must ascend within [0, T]");
    }

    std::vector<PlanarSample> out;
    out.reserve(times.size());
    detail::PlanarState s{alpha, 0.0};
    double tcur = 0.0;
    std::size_t next = 0;
    if (next < times.size() && times[next] == 0.0) {
        out.push_back({0.0, s.x, s.y});
        ++next;
    }
    while (next < times.size()) {
        double tgt = times[next];
        // never integrate across the switch in one segment
        const bool split = tcur < w.tau && tgt > w.tau;
        if (split) tgt = w.tau;
        const double sign_a = tcur < w.tau ? -w.a_plus : w.a_minus;
        auto deriv = [&](const detail::PlanarState& st) {
            return detail::PlanarState{spec.kernel.h(st.y),
                                       sign_a * spec.nonlinearity.g(st.x)};
        };
        const long m = std::max(1L, static_cast<long>(std::ceil((tgt - tcur) / max_step - 1e-9)));
        const double h = (tgt - tcur) / static_cast<double>(m);
        for (long i = 0; i < m; ++i) s = detail::rk4_step(s, h, deriv);
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !(s.x > 0.0))
            throw contract_error("oracle_at_times: trajectory left the admissible region");
        tcur = tgt;
        if (!split) {
            out.push_back({tcur, s.x, s.y});
            ++next;
        }
    }
    return out;
}

// Terminal residual y(T; alpha), or nothing if the trajectory hit the
// singularity before reaching T.
inline std::optional<double> shooting_residual(double alpha, const ProblemSpec& spec,
                                               double step) {
    const ShootResult r = shoot(alpha, spec, step, /*record=*/false);
    if (r.hit_singularity) return std::nullopt;
    return r.residual_neumann();
}

struct ScanPoint {
    double alpha;
    std::optional<double> residual;  // empty when the trajectory hit the singularity
};

// Residual scan over a geometric alpha grid.
inline std::vector<ScanPoint> shooting_scan(const ProblemSpec& spec, double alpha_lo,
                                            double alpha_hi, int n, double step) {
    if (!(0.0 < alpha_lo && alpha_lo < alpha_hi))
        throw std::invalid_argument("shooting_scan: need 0 < alpha_lo < alpha_hi");
    if (n < 2) throw std::invalid_argument("shooting_scan: need at least two points");
    std::vector<ScanPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double log_lo = std::log(alpha_lo);
    const double log_hi = std::log(alpha_hi);
    for (int i = 0; i < n; ++i) {
        const double a = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1.0));
        pts.push_back(ScanPoint{a, shooting_residual(a, spec, step)});
    }
    return pts;
}

// First adjacent pair of valid scan points whose residuals change sign.
inline std::optional<std::pair<double, double>> scan_bracket(
    const std::vector<ScanPoint>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!pts[i - 1].residual || !pts[i].residual) continue;
        const double a = *pts[i - 1].residual;
        const double b = *pts[i].residual;
        if (a == 0.0) return std::make_pair(pts[i - 1].alpha, pts[i - 1].alpha);
        if ((a > 0.0) != (b > 0.0)) return std::make_pair(pts[i - 1].alpha, pts[i].alpha);
    }
    return std::nullopt;
}

// Bisection on the terminal residual over a bracketing [alpha_lo, alpha_hi].
// The bracket is driven down to rel_x_tol in alpha (the residual slope can be
// shallow, so stopping on the residual alone would leave alpha poorly
// resolved); the returned alpha must still satisfy |y(T)| < residual_tol.
// Periodic problems reduce to the Neumann sub-problem on the half-window.
inline double shooting_solve(const ProblemSpec& spec, double alpha_lo, double alpha_hi,
                             double step, double residual_tol = 1e-8,
                             double rel_x_tol = 1e-12) {
    if (spec.bc == BoundaryCondition::Periodic) {
        const ProblemSpec half(spec.kernel, spec.nonlinearity, spec.half_weight(),
                               BoundaryCondition::Neumann);
        return shooting_solve(half, alpha_lo, alpha_hi, step, residual_tol, rel_x_tol);
    }
    auto rlo = shooting_residual(alpha_lo, spec, step);
    auto rhi = shooting_residual(alpha_hi, spec, step);
    if (!rlo || !rhi)
        throw no_bracket_error("shooting_solve: trajectory hit the singularity at a bracket endpoint");
    if (*rlo == 0.0) return alpha_lo;
    if (*rhi == 0.0) return alpha_hi;
    if ((*rlo > 0.0) == (*rhi > 0.0))
        throw no_bracket_error("shooting_solve: y(T; alpha) has the same sign at both bracket endpoints");

    double lo = alpha_lo, hi = alpha_hi, flo = *rlo;
    double mid = 0.5 * (lo + hi);
    double fmid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const auto fm = shooting_residual(mid, spec, step);
        if (!fm)
            throw no_bracket_error("shooting_solve: trajectory hit the singularity inside the bracket");
        fmid = *fm;
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_x_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    if (std::abs(fmid) < residual_tol) return mid;
    throw no_bracket_error(
        "shooting_solve: bisection converged in alpha but the terminal residual stayed above tolerance");
}

// Scan-then-bisect: locates a sign change of y(T; alpha) over a geometric
// grid (skipping singular trajectories) and refines it.  The scan may use a
// coarser step than the bisection; sign detection is insensitive to the
// integrator error except within it of the root.  Throws no_bracket_error
// when the scan finds no sign change among adjacent valid points.
inline double shooting_solve_auto(const ProblemSpec& spec, double alpha_lo, double alpha_hi,
                                  int scan_points, double step, double residual_tol = 1e-8,
                                  std::optional<double> scan_step = {}) {
    if (spec.bc == BoundaryCondition::Periodic) {
        const ProblemSpec half(spec.kernel, spec.nonlinearity, spec.half_weight(),
                               BoundaryCondition::Neumann);
        return shooting_solve_auto(half, alpha_lo, alpha_hi, scan_points, step, residual_tol,
                                   scan_step);
    }
    const auto pts =
        shooting_scan(spec, alpha_lo, alpha_hi, scan_points, scan_step.value_or(step));
    const auto bracket = scan_bracket(pts);
    if (!bracket)
        throw no_bracket_error("shooting_solve_auto: y(T; alpha) shows no sign change over the scan");
    if (bracket->first == bracket->second) return bracket->first;
    return shooting_solve(spec, bracket->first, bracket->second, step, residual_tol);
}

}  // namespace phibvp
