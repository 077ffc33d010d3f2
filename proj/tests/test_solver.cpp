#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "phibvp/oracle.hpp"
#include "phibvp/solver.hpp"

using namespace phibvp;

namespace {

ProblemSpec linear_spec(double gamma, WeightSpec w,
                        BoundaryCondition bc = BoundaryCondition::Neumann) {
    return ProblemSpec(make_operator(KernelKind::Linear), PowerNonlinearity(gamma), w, bc);
}

ProblemSpec plap_spec(double p, double gamma, WeightSpec w) {
    return ProblemSpec(make_operator(KernelKind::PLaplacian, p), PowerNonlinearity(gamma), w);
}

}  // namespace

TEST_CASE("classification in the theorem regimes") {
    // abar = 1*1 - 2*2 = -3 < 0
    const auto v1 = classify_existence(linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK(v1.status == ExistenceStatus::UniqueExists);
    CHECK(v1.report.abar == Catch::Approx(-3.0));
    CHECK(v1.report.exists.value());

    const auto v2 = classify_existence(linear_spec(-3.0, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK(v2.status == ExistenceStatus::NoneExists);
    CHECK_FALSE(v2.report.exists.value());

    // boundary gamma = (1-2p)/(p-1) is inside the uniqueness regime
    const auto v3 = classify_existence(plap_spec(3.0, -2.5, WeightSpec(3.0, 1.0, 2.0, 3.0)));
    CHECK(v3.status == ExistenceStatus::UniqueExists);

    // abar = 0 fails the strict inequality
    const auto v4 = classify_existence(linear_spec(3.0, WeightSpec(1.0, 1.0, 1.5, 3.0)));
    CHECK(v4.status == ExistenceStatus::NoneExists);
}

TEST_CASE("classification in the open ranges") {
    // gamma in ]-1, 0[: existence via a-/a+ < tau/(T-tau) < K0; K0(-1/2) = 5
    // at equal weights, so tau/(T-tau) = 3 qualifies
    const auto v = classify_existence(linear_spec(-0.5, WeightSpec(1.0, 1.0, 3.0, 4.0)));
    CHECK(v.status == ExistenceStatus::OutsideTheory);
    REQUIRE(v.report.exists.has_value());
    CHECK(v.report.exists.value());
    CHECK(v.report.k0.value() == Catch::Approx(5.0).margin(1e-6));

    // same gamma, target outside the window: no conclusion
    const auto v2 = classify_existence(linear_spec(-0.5, WeightSpec(1.0, 1.0, 0.5, 3.0)));
    CHECK(v2.status == ExistenceStatus::OutsideTheory);
    CHECK_FALSE(v2.report.exists.has_value());

    // gamma in ]0, 1[: iff condition with uniqueness
    const auto v3 = classify_existence(linear_spec(0.5, WeightSpec(1.0, 2.0, 1.5, 3.0)));
    CHECK((v3.status == ExistenceStatus::UniqueExists ||
           v3.status == ExistenceStatus::NoneExists));
    const double k0 = v3.report.k0.value();
    const bool inside = k0 < 1.0 && 1.0 < 2.0;  // target_ratio = 1
    CHECK((v3.status == ExistenceStatus::UniqueExists) == inside);

    // gamma in ]-3, -1[: existence iff abar > 0, uniqueness open
    const auto v4 = classify_existence(linear_spec(-2.0, WeightSpec(1.0, 2.0, 2.4, 3.0)));
    CHECK(v4.status == ExistenceStatus::OutsideTheory);
    CHECK(v4.report.exists.value());
    const auto v5 = classify_existence(linear_spec(-2.0, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK_FALSE(v5.report.exists.value());
}

TEST_CASE("classification degenerate and unsupported cases") {
    CHECK(classify_existence(linear_spec(1.0, WeightSpec(1.0, 2.0, 1.0, 3.0))).status ==
          ExistenceStatus::EigenvalueDegenerate);
    CHECK(classify_existence(plap_spec(3.0, 2.0, WeightSpec(1.0, 2.0, 1.0, 3.0))).status ==
          ExistenceStatus::EigenvalueDegenerate);

    const auto g0 = classify_existence(linear_spec(0.0, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK(g0.status == ExistenceStatus::OutsideTheory);
    CHECK_FALSE(g0.report.exists.value());
    const auto g0bal = classify_existence(linear_spec(0.0, WeightSpec(1.0, 2.0, 2.0, 3.0)));
    CHECK(g0bal.report.exists.value());  // abar = 0: the degenerate family

    const ProblemSpec mink(make_operator(KernelKind::Minkowski), PowerNonlinearity(3.0),
                           WeightSpec(1.0, 2.0, 1.0, 3.0));
    CHECK(classify_existence(mink).status == ExistenceStatus::OutsideTheory);

    // p != 2 in the uncovered window: necessary condition only
    const auto gap = classify_existence(plap_spec(3.0, 0.5, WeightSpec(3.0, 1.0, 2.0, 3.0)));
    CHECK(gap.status == ExistenceStatus::OutsideTheory);
    CHECK_FALSE(gap.report.exists.value());  // gamma > 0 with abar > 0 is impossible
    const auto gap2 = classify_existence(plap_spec(3.0, 0.5, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK_FALSE(gap2.report.exists.has_value());
}

TEST_CASE("solve_reduced on the strong-force closed form") {
    // gamma = -3 makes F(rho) = rho, so tau/(T-tau) = 4 pins rho-hat = 4
    const auto spec = linear_spec(-3.0, WeightSpec(1.0, 2.0, 2.4, 3.0));
    const auto sol = solve_reduced(spec);
    CHECK(sol.rho == Catch::Approx(4.0).margin(1e-10));
    CHECK(sol.alpha == Catch::Approx(1.948007492850597).epsilon(1e-9));
    CHECK(sol.omega < 0.0);  // sign(gamma + 1)
    CHECK(sol.sigma == Catch::Approx((spec.weight.a_plus / spec.weight.a_minus) * sol.omega *
                                     sol.rho).epsilon(1e-12));
    CHECK(0.0 < sol.beta);
    CHECK(sol.beta < sol.x_star);
    CHECK(sol.x_star < sol.alpha);
    CHECK(std::abs(sol.residual_first) <= 1e-8 * sol.target_first);
    CHECK(std::abs(sol.residual_second) <= 1e-8 * sol.target_second);

    // G(x*) is the mu-convex combination of omega and sigma
    const auto& nl = spec.nonlinearity;
    const double mu = spec.weight.mu();
    CHECK(nl.G(sol.x_star) ==
          Catch::Approx(mu * sol.omega + (1.0 - mu) * sol.sigma).epsilon(1e-10));
    // level-set membership of (x*, y*)
    const auto& k = spec.kernel;
    CHECK(k.H(sol.y_star) + spec.weight.a_plus * nl.G(sol.x_star) ==
          Catch::Approx(spec.weight.a_plus * nl.G(sol.alpha)).margin(1e-8));
    CHECK(sol.y_star <= 0.0);
}

TEST_CASE("solve_reduced rejects the boundary target") {
    // tau/(T-tau) = 2 equals a-/a+: the would-be root sits on the domain edge
    const auto spec = linear_spec(-3.0, WeightSpec(1.0, 2.0, 2.0, 3.0));
    CHECK_THROWS_AS(solve_reduced(spec), no_solution_error);
}

TEST_CASE("solve_reduced superlinear reference instance") {
    const auto spec = linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0));
    const auto sol = solve_reduced(spec);
    CHECK(sol.rho == Catch::Approx(0.11005160616097267).margin(1e-10));
    CHECK(sol.omega == Catch::Approx(0.060776568089290177).epsilon(1e-9));
    CHECK(sol.alpha == Catch::Approx(0.70218094686020598).epsilon(1e-9));
    CHECK(sol.omega > 0.0);
    CHECK(0.0 < sol.beta);
    CHECK(sol.beta < sol.x_star);
    CHECK(sol.x_star < sol.alpha);
    // shooting confirmation: the reduced alpha closes the Neumann conditions
    const auto shot = shoot(sol.alpha, spec, spec.weight.T / 1e5, false);
    CHECK_FALSE(shot.hit_singularity);
    CHECK(std::abs(shot.residual_neumann()) < 1e-6);
    // necessary sign condition on any success
    CHECK(spec.gamma() * spec.weight.abar() < 0.0);
}

TEST_CASE("solve_reduced degenerate exponents") {
    CHECK_THROWS_AS(solve_reduced(linear_spec(0.0, WeightSpec(1.0, 2.0, 2.0, 3.0))),
                    degenerate_family_error);
    CHECK_THROWS_AS(solve_reduced(linear_spec(1.0, WeightSpec(1.0, 2.0, 1.0, 3.0))),
                    eigenvalue_degenerate_error);
    CHECK_THROWS_AS(solve_reduced(plap_spec(3.0, 2.0, WeightSpec(1.0, 2.0, 1.0, 3.0))),
                    eigenvalue_degenerate_error);
    const ProblemSpec mink(make_operator(KernelKind::Minkowski), PowerNonlinearity(3.0),
                           WeightSpec(1.0, 2.0, 1.0, 3.0));
    CHECK_THROWS_AS(solve_reduced(mink), unsupported_error);
    // wrong-sign target for the increasing branch
    CHECK_THROWS_AS(solve_reduced(linear_spec(3.0, WeightSpec(3.0, 1.0, 2.0, 3.0))),
                    no_solution_error);
}

TEST_CASE("solve_reduced in the open ranges uses the scan path") {
    // gamma in ]-1, 0[ with the K0 window satisfied
    const auto spec = linear_spec(-0.5, WeightSpec(1.0, 1.0, 3.0, 4.0));
    const auto sol = solve_reduced(spec);
    CHECK(0.0 < sol.rho);
    CHECK(sol.rho < 1.0);
    CHECK(std::abs(sol.residual_first) <= 1e-8 * sol.target_first);
    CHECK(std::abs(sol.residual_second) <= 1e-8 * sol.target_second);
    const auto shot = shoot(sol.alpha, spec, spec.weight.T / 1e5, false);
    CHECK(std::abs(shot.residual_neumann()) < 1e-6);

    // gamma in ]-3, -1[ with abar > 0
    const auto spec2 = linear_spec(-2.0, WeightSpec(1.0, 2.0, 2.4, 3.0));
    const auto sol2 = solve_reduced(spec2);
    CHECK(sol2.rho > 2.0);
    const auto shot2 = shoot(sol2.alpha, spec2, spec2.weight.T / 1e5, false);
    CHECK(std::abs(shot2.residual_neumann()) < 1e-6);
}

TEST_CASE("periodic solve matches the halved Neumann sub-problem") {
    const auto periodic =
        linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0), BoundaryCondition::Periodic);
    const auto half_neumann = linear_spec(3.0, WeightSpec(1.0, 2.0, 0.5, 1.5));
    const auto sp = solve_reduced(periodic);
    const auto sh = solve_reduced(half_neumann);
    CHECK(sp.rho == Catch::Approx(sh.rho).epsilon(1e-12));
    CHECK(sp.omega == Catch::Approx(sh.omega).epsilon(1e-12));
    CHECK(sp.target_first == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(sp.target_second == Catch::Approx(1.0).epsilon(1e-15));
    // the quotient target is unchanged, so rho-hat equals the full problem's
    const auto sfull = solve_reduced(linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0)));
    CHECK(sp.rho == Catch::Approx(sfull.rho).margin(1e-10));
}

TEST_CASE("count_solutions around the reference crossings") {
    // gamma = -0.4 descends from K0 = 8.14 to 2; target 4 crosses once
    const auto spec = linear_spec(-0.4, WeightSpec(1.0, 2.0, 2.4, 3.0));
    const auto rep = count_solutions(spec, 120);
    CHECK(rep.count == 1);
    REQUIRE(rep.crossings.size() == 1);
    CHECK(rep.crossings[0] > 0.3);
    CHECK(rep.crossings[0] < 0.5);
    CHECK(rep.skipped == 0);

    // gamma = 2: range is ]0, 2[, target 3 is unreachable
    const auto spec2 = linear_spec(2.0, WeightSpec(1.0, 2.0, 2.25, 3.0));
    CHECK(count_solutions(spec2, 120).count == 0);

    // gamma = -2 with target F(10) = 18.1801: crossing at rho = 10
    const double target = 18.180095324624556;
    const double tau = 3.0 * target / (1.0 + target);
    const auto spec3 = linear_spec(-2.0, WeightSpec(1.0, 2.0, tau, 3.0));
    const auto rep3 = count_solutions(spec3, 120);
    CHECK(rep3.count == 1);
    CHECK(rep3.crossings[0] == Catch::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("count_solutions argument checks") {
    CHECK_THROWS_AS(count_solutions(linear_spec(0.0, WeightSpec(1.0, 2.0, 1.0, 3.0)), 60),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_solutions(linear_spec(2.0, WeightSpec(1.0, 2.0, 1.0, 3.0)), 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        count_solutions(linear_spec(2.0, WeightSpec(1.0, 2.0, 1.0, 3.0)), 60, {}, 1.0, 5.0),
        std::domain_error);
}

TEST_CASE("count agrees with the verdict over a parameter grid") {
    const double targets[5] = {0.4, 0.8, 1.5, 2.5, 4.0};
    for (double gamma : {-5.0, -3.0, 2.0, 3.0, 4.0}) {
        for (double target : targets) {
            const double tau = 3.0 * target / (1.0 + target);
            const auto spec = linear_spec(gamma, WeightSpec(1.0, 2.0, tau, 3.0));
            const auto verdict = classify_existence(spec);
            const auto rep = count_solutions(spec, 60);
            if (verdict.status == ExistenceStatus::UniqueExists) {
                CHECK(rep.count == 1);
            } else {
                REQUIRE(verdict.status == ExistenceStatus::NoneExists);
                CHECK(rep.count == 0);
            }
        }
    }
}

TEST_CASE("bifurcation curve scaling for gamma = 3") {
    const auto spec = linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0));
    const auto pts = bifurcation_curve(spec, {0.25, 1.0, 4.0});
    REQUIRE(pts.size() == 3);
    // omega ~ lambda^{(gamma+1)/(1-gamma)} = lambda^{-2}
    const double c0 = pts[0].omega * 0.25 * 0.25;
    const double c1 = pts[1].omega;
    const double c2 = pts[2].omega * 16.0;
    CHECK(c1 == Catch::Approx(c0).epsilon(1e-9));
    CHECK(c2 == Catch::Approx(c0).epsilon(1e-9));
    // lambda = 1 reproduces the plain solve
    const auto sol = solve_reduced(spec);
    CHECK(pts[1].omega == Catch::Approx(sol.omega).epsilon(1e-9));
    CHECK(pts[1].alpha == Catch::Approx(sol.alpha).epsilon(1e-9));
    CHECK_FALSE(pts[1].omega_free);
}

TEST_CASE("principal eigenvalue at gamma = 1") {
    const WeightSpec w(1.0, 2.0, 1.0, 3.0);
    const auto spec = linear_spec(1.0, w);
    const auto pts = bifurcation_curve(spec, {});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].omega_free);
    const double lam1 = pts[0].lambda;
    CHECK(lam1 == Catch::Approx(0.90433122962061369).epsilon(1e-9));

    // at lambda_1 the linear problem has a one-signed Neumann solution;
    // off the eigenvalue it does not
    auto residual_at = [&](double lam) {
        const auto scaled = linear_spec(1.0, WeightSpec(lam * w.a_plus, lam * w.a_minus,
                                                        w.tau, w.T));
        return std::abs(shoot(1.0, scaled, w.T / 1e5, false).residual_neumann());
    };
    CHECK(residual_at(lam1) < 1e-6);
    CHECK(residual_at(1.1 * lam1) > 1e-2);
}

TEST_CASE("bifurcation curve argument checks") {
    CHECK_THROWS_AS(bifurcation_curve(plap_spec(3.0, 4.0, WeightSpec(1.0, 2.0, 1.0, 3.0)), {1.0}),
                    unsupported_error);
    CHECK_THROWS_AS(bifurcation_curve(linear_spec(0.5, WeightSpec(1.0, 2.0, 1.0, 3.0)), {1.0}),
                    std::domain_error);
    CHECK_THROWS_AS(bifurcation_curve(linear_spec(3.0, WeightSpec(1.0, 2.0, 1.0, 3.0)), {0.0}),
                    std::invalid_argument);
    // no admissible rho-hat when the target is on the wrong side
    CHECK_THROWS_AS(bifurcation_curve(linear_spec(3.0, WeightSpec(3.0, 1.0, 2.0, 3.0)), {1.0}),
                    no_solution_error);
}
