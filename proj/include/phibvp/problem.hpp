#pragma once

#include <cmath>
#include <stdexcept>

#include "phibvp/kernels.hpp"

namespace phibvp {

// Stepwise sign-changing weight:
//   a(t) = a_plus on [0, tau[,   a(t) = -a_minus on [tau, T[.
struct WeightSpec {
    double a_plus;
    double a_minus;
    double tau;
    double T;

    WeightSpec(double a_plus_, double a_minus_, double tau_, double T_)
        : a_plus(a_plus_), a_minus(a_minus_), tau(tau_), T(T_) {
        if (!(a_plus > 0.0) || !(a_minus > 0.0))
            throw std::invalid_argument("weight magnitudes a_plus, a_minus must be positive");
        if (!(0.0 < tau && tau < T))
            throw std::invalid_argument("the switch time must satisfy 0 < tau < T");
    }

    // integral of a over one period
    double abar() const { return a_plus * tau - a_minus * (T - tau); }

    double mu() const { return a_plus / (a_plus + a_minus); }

    double ratio() const { return a_minus / a_plus; }

    // tau/(T - tau): the right-hand side of the quotient equation
    double target_ratio() const { return tau / (T - tau); }

    double at(double t) const { return t < tau ? a_plus : -a_minus; }
};

enum class BoundaryCondition { Neumann, Periodic };

struct ProblemSpec {
    OperatorKernel kernel;
    PowerNonlinearity nonlinearity;
    WeightSpec weight;
    BoundaryCondition bc;

    ProblemSpec(OperatorKernel kernel_, PowerNonlinearity nonlinearity_, WeightSpec weight_,
                BoundaryCondition bc_ = BoundaryCondition::Neumann)
        : kernel(kernel_), nonlinearity(nonlinearity_), weight(weight_), bc(bc_) {
        if (bc == BoundaryCondition::Periodic) {
            // the periodic-to-Neumann reduction needs h odd; holds for every
            // supported kernel, asserted cheaply here
            const double probe = kernel.h(0.75) + kernel.h(-0.75);
            if (std::abs(probe) > 1e-15)
                throw std::invalid_argument("periodic problems require an odd h = phi^{-1}");
        }
    }

    double gamma() const { return nonlinearity.gamma(); }

    // Weight of the Neumann sub-problem on the half-window
    // [tau/2, (T+tau)/2], in time coordinates shifted to start at 0.
    WeightSpec half_weight() const {
        return WeightSpec(weight.a_plus, weight.a_minus, 0.5 * weight.tau, 0.5 * weight.T);
    }

    // Targets of the reduced system: (tau, T - tau) for Neumann, halved for
    // the periodic reduction.  Their quotient is the same either way.
    double target_first() const {
        return bc == BoundaryCondition::Neumann ? weight.tau : 0.5 * weight.tau;
    }
    double target_second() const {
        const double full = weight.T - weight.tau;
        return bc == BoundaryCondition::Neumann ? full : 0.5 * full;
    }
};

}  // namespace phibvp
