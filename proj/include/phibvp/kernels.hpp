#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace phibvp {

namespace detail {

// |x|^e.  Exponents are only ever applied to magnitudes; signs are tracked
// explicitly at the call sites, so a negative base can never fault the real
// pow.
inline double pow_abs(double x, double e) { return std::pow(std::abs(x), e); }

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

enum class KernelKind { Linear, PLaplacian, Minkowski };

// Closed-form data attached to the operator phi: the inverse h = phi^{-1},
// its even primitive H with H(0) = 0, the one-sided inverses of H, and
// L_h = h o H_l^{-1}.
//
//   Linear:      h(y) = y                      L_h(xi) = -sqrt(2 xi)
//   p-Laplacian: h(y) = sign(y) |y|^{1/(p-1)}  L_h(xi) = -(p/(p-1))^{1/p} xi^{1/p}
//   Minkowski:   h(y) = y / sqrt(1 + y^2)      L_h(xi) = -sqrt(xi^2 + 2 xi)/(1 + xi)
//
// h is defined on all of R (for Minkowski, h maps R onto the operator's
// domain ]-1, 1[), so no clamping is needed anywhere downstream.
class OperatorKernel {
public:
    KernelKind kind() const { return kind_; }

    // Linear and p-Laplacian admit the homogeneous time-map reduction; the
    // linear kernel behaves as p = 2 throughout.
    bool power_type() const { return kind_ != KernelKind::Minkowski; }

    double power_p() const {
        if (!power_type())
            throw std::logic_error("the Minkowski kernel has no homogeneity exponent p");
        return p_;
    }

    double h(double y) const {
        switch (kind_) {
            case KernelKind::Linear:
                return y;
            case KernelKind::PLaplacian:
                return detail::sign_of(y) * detail::pow_abs(y, 1.0 / (p_ - 1.0));
            case KernelKind::Minkowski:
            default:
                return y / std::hypot(1.0, y);
        }
    }

    double H(double y) const {
        switch (kind_) {
            case KernelKind::Linear:
                return 0.5 * y * y;
            case KernelKind::PLaplacian:
                return (p_ - 1.0) / p_ * detail::pow_abs(y, p_ / (p_ - 1.0));
            case KernelKind::Minkowski:
            default:
                // sqrt(1 + y^2) - 1 without cancellation at small y
                return y * y / (std::hypot(1.0, y) + 1.0);
        }
    }

    // Right inverse of H: H_r_inv(H(y)) = y for y >= 0.  Requires xi >= 0.
    double H_r_inv(double xi) const {
        check_nonnegative(xi);
        switch (kind_) {
            case KernelKind::Linear:
                return std::sqrt(2.0 * xi);
            case KernelKind::PLaplacian:
                return std::pow(p_ / (p_ - 1.0) * xi, (p_ - 1.0) / p_);
            case KernelKind::Minkowski:
            default:
                return std::sqrt(xi * (xi + 2.0));
        }
    }

    // Left inverse of H: H_l_inv(H(y)) = y for y <= 0.  h odd makes it the
    // mirror of H_r_inv.
    double H_l_inv(double xi) const { return -H_r_inv(xi); }

    // L_h = h o H_l^{-1}: nonpositive on [0, +inf[, L_h(0) = 0.
    double L_h(double xi) const {
        check_nonnegative(xi);
        switch (kind_) {
            case KernelKind::Linear:
                return -std::sqrt(2.0 * xi);
            case KernelKind::PLaplacian:
                return -std::pow(p_ / (p_ - 1.0), 1.0 / p_) * std::pow(xi, 1.0 / p_);
            case KernelKind::Minkowski:
            default:
                return -std::sqrt(xi * (xi + 2.0)) / (1.0 + xi);
        }
    }

private:
    friend OperatorKernel make_operator(KernelKind, std::optional<double>);

    OperatorKernel(KernelKind kind, double p) : kind_(kind), p_(p) {}

    static void check_nonnegative(double xi) {
        if (xi < 0.0)
            throw std::domain_error("H inverses and L_h are defined on [0, +inf[ only");
    }

    KernelKind kind_;
    double p_;
};

inline OperatorKernel make_operator(KernelKind kind, std::optional<double> p = {}) {
    if (kind == KernelKind::PLaplacian) {
        if (!p)
            throw std::invalid_argument("the p-Laplacian kernel needs its exponent p");
        if (!(*p > 1.0))
            throw std::invalid_argument(
                "p-Laplacian kernel requires p > 1: phi is not a homeomorphism otherwise");
        return OperatorKernel(kind, *p);
    }
    if (p)
        throw std::invalid_argument("the exponent p applies to the p-Laplacian kernel only");
    if (kind == KernelKind::Linear) return OperatorKernel(kind, 2.0);
    return OperatorKernel(kind, std::numeric_limits<double>::quiet_NaN());
}

// Classification of the primitive G of g by its limits at 0+ and +infinity:
//   (i)   G0 finite,    Ginf = +inf
//   (ii)  G0 finite,    Ginf finite
//   (iii) G0 = -inf,    Ginf = +inf
//   (iv)  G0 = -inf,    Ginf finite
// Pure powers u^gamma only realize (i) (gamma > -1) and (iv) (gamma < -1);
// (ii) is reachable only through a generic-g extension and (iii) never is.
enum class CaseClass { CaseI, CaseII, CaseIII, CaseIV };

inline CaseClass classify_nonlinearity(double gamma) {
    if (gamma == -1.0)
        throw std::invalid_argument(
            "gamma = -1 gives G a logarithmic primitive, which is unsupported");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double g_at_zero = (gamma > -1.0) ? 0.0 : -inf;
    const double g_at_inf = (gamma > -1.0) ? inf : 0.0;
    const bool zero_finite = std::isfinite(g_at_zero);
    const bool inf_finite = std::isfinite(g_at_inf);
    if (zero_finite && !inf_finite) return CaseClass::CaseI;
    if (zero_finite && inf_finite) return CaseClass::CaseII;
    if (!zero_finite && !inf_finite) return CaseClass::CaseIII;
    return CaseClass::CaseIV;
}

// g(u) = u^gamma on ]0, +inf[ with gamma != -1, together with its primitive
// G(x) = x^{gamma+1}/(gamma+1), the inverse of G, and L_g = g o G^{-1}.
class PowerNonlinearity {
public:
    explicit PowerNonlinearity(double gamma)
        : gamma_(gamma), case_(classify_nonlinearity(gamma)) {}

    double gamma() const { return gamma_; }
    CaseClass case_class() const { return case_; }

    // gamma/(gamma+1): the exponent of |.| inside every time-map integrand.
    double exponent_ratio() const { return gamma_ / (gamma_ + 1.0); }

    double g(double u) const { return detail::pow_abs(u, gamma_); }

    double G(double x) const { return detail::pow_abs(x, gamma_ + 1.0) / (gamma_ + 1.0); }

    // G_inv(G(x)) = x for x > 0; the argument lives in sign(gamma+1) ]0,+inf[.
    double G_inv(double xi) const {
        return detail::pow_abs(std::abs(gamma_ + 1.0) * std::abs(xi), 1.0 / (gamma_ + 1.0));
    }

    double L_g(double xi) const {
        return detail::pow_abs(std::abs(gamma_ + 1.0) * std::abs(xi), exponent_ratio());
    }

    // G(x_top) - G(x_top - d), d in [0, x_top].  Computed through expm1/log1p
    // so the gap survives d << x_top.
    double G_drop(double x_top, double d) const {
        const double e = gamma_ + 1.0;
        return detail::pow_abs(x_top, e) * (-std::expm1(e * std::log1p(-d / x_top))) / e;
    }

    // G(x_bot + d) - G(x_bot), d >= 0, x_bot > 0.
    double G_rise(double x_bot, double d) const {
        const double e = gamma_ + 1.0;
        return detail::pow_abs(x_bot, e) * std::expm1(e * std::log1p(d / x_bot)) / e;
    }

private:
    double gamma_;
    CaseClass case_;
};

}  // namespace phibvp
