#pragma once

#include <stdexcept>
#include <string>

namespace phibvp {

// Quadrature refinement exhausted max_levels without meeting tolerance.
// Carries the last two level estimates for diagnostics.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double previous_estimate, double last_estimate)
        : std::runtime_error(what),
          previous_estimate_(previous_estimate),
          last_estimate_(last_estimate) {}

    double previous_estimate() const noexcept { return previous_estimate_; }
    double last_estimate() const noexcept { return last_estimate_; }

private:
    double previous_estimate_;
    double last_estimate_;
};

// The reduced system has no root; the message names the violated inequality.
class no_solution_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// gamma = p-1: the first reduced equation fixes the eigenvalue, not omega.
class eigenvalue_degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// gamma = 0: the quotient equation does not depend on rho, so any solution
// comes in a one-parameter family.
class degenerate_family_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A residual scan found no sign change to bracket.
class no_bracket_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested a computation outside the supported theory (e.g. Minkowski
// uniqueness verdicts, or K0 for p != 2).
class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal consistency violated: inputs that should only be produced together
// were wired together incorrectly.
class contract_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace phibvp
