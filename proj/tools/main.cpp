// Command-line front end: curve sampling, solve reports, verification matrix.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phibvp/acceptance.hpp"
#include "phibvp/parallel.hpp"
#include "phibvp/phibvp.hpp"

using nlohmann::json;
using namespace phibvp;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string kernel = "linear";  // linear | plaplacian | minkowski
    double p = 3.0;                 // exponent when kernel = plaplacian
    double gamma = 0.0;
    double a_plus = 1.0;
    double a_minus = 2.0;
    double tau = 1.0;
    double T = 3.0;
    std::string bc = "neumann";
    std::string format = "csv";
    std::string out;  // empty = stdout
    QuadratureConfig quad;
    double step = 0.0;  // 0 = T / 1e5
};

OperatorKernel kernel_of(const RunConfig& cfg) {
    if (cfg.kernel == "linear") return make_operator(KernelKind::Linear);
    if (cfg.kernel == "plaplacian") return make_operator(KernelKind::PLaplacian, cfg.p);
    if (cfg.kernel == "minkowski") return make_operator(KernelKind::Minkowski);
    throw std::invalid_argument("unknown kernel '" + cfg.kernel + "'");
}

ProblemSpec spec_of(const RunConfig& cfg) {
    const auto bc =
        cfg.bc == "periodic" ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
    return ProblemSpec(kernel_of(cfg), PowerNonlinearity(cfg.gamma),
                       WeightSpec(cfg.a_plus, cfg.a_minus, cfg.tau, cfg.T), bc);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string error_code_of(const std::exception& e) {
    if (dynamic_cast<const no_solution_error*>(&e)) return "no_solution";
    if (dynamic_cast<const eigenvalue_degenerate_error*>(&e)) return "eigenvalue_degenerate";
    if (dynamic_cast<const degenerate_family_error*>(&e)) return "degenerate_family";
    if (dynamic_cast<const no_bracket_error*>(&e)) return "no_bracket";
    if (dynamic_cast<const quadrature_error*>(&e)) return "quadrature_failure";
    if (dynamic_cast<const unsupported_error*>(&e)) return "unsupported";
    if (dynamic_cast<const contract_error*>(&e)) return "internal_contract";
    return "invalid_argument";
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << body;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// ----- curve ---------------------------------------------------------------

struct CurveRow {
    double gamma;
    double rho;
    double value = 0.0;
    bool is_limit = false;
    std::string error;
};

std::vector<CurveRow> sample_curve(const ProblemSpec& spec, const std::vector<double>& rhos,
                                   bool figure_mode, const QuadratureConfig& q) {
    std::vector<CurveRow> rows(rhos.size());
    const double ratio = spec.weight.ratio();
    parallel_for(rhos.size(), [&](std::size_t i) {
        CurveRow& row = rows[i];
        row.gamma = spec.gamma();
        row.rho = rhos[i];
        try {
            // boundary rows get the analytic limit, flagged, never a clamp
            if (figure_mode && (row.rho == 0.0 || std::abs(row.rho - ratio) <= 1e-12)) {
                const FLimits lims = F_limits(spec, q);
                row.value = row.rho == 0.0 ? lims.at_far_end : lims.at_ratio;
                row.is_limit = true;
            } else {
                row.value = F_quotient(row.rho, spec, q);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

int cmd_curve(const RunConfig& cfg, int figure, double rho_min, double rho_max, int grid) {
    std::vector<std::pair<double, std::vector<double>>> curves;  // gamma -> rho grid
    bool figure_mode = figure != 0;
    if (figure == 1) {
        for (double g : {-0.4, -0.2, 0.0, 0.2, 0.8}) {
            std::vector<double> rhos;
            for (int k = 0; k <= 50; ++k) rhos.push_back(2.0 * k / 50.0);
            curves.emplace_back(g, std::move(rhos));
        }
    } else if (figure == 2) {
        for (double g : {-1.5, -1.6, -1.8, -2.0, -3.0}) {
            std::vector<double> rhos;
            for (int k = 0; k <= 18; ++k) rhos.push_back(2.0 + k);
            curves.emplace_back(g, std::move(rhos));
        }
    } else {
        if (!(rho_min < rho_max) || grid < 2) {
            std::cerr << "curve: need --rho-min < --rho-max and --grid >= 2\n";
            return 2;
        }
        std::vector<double> rhos;
        for (int k = 0; k < grid; ++k)
            rhos.push_back(rho_min + (rho_max - rho_min) * k / (grid - 1.0));
        curves.emplace_back(cfg.gamma, std::move(rhos));
    }

    RunConfig base = cfg;
    if (figure_mode) {
        base.kernel = "linear";
        base.a_plus = 1.0;
        base.a_minus = 2.0;
        base.bc = "neumann";
    }

    std::vector<CurveRow> rows;
    for (const auto& [g, rhos] : curves) {
        RunConfig c = base;
        c.gamma = g;
        const auto spec = spec_of(c);
        auto part = sample_curve(spec, rhos, figure_mode, cfg.quad);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    int bad_rows = 0;
    for (const auto& row : rows)
        if (!row.error.empty()) {
            ++bad_rows;
            std::cerr << "curve: gamma=" << row.gamma << " rho=" << row.rho << ": " << row.error
                      << "\n";
        }

    if (cfg.format == "json") {
        json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["rows"] = json::array();
        for (const auto& row : rows) {
            json r;
            if (figure_mode) r["gamma"] = row.gamma;
            r["rho"] = row.rho;
            if (row.error.empty()) {
                r["f"] = row.value;
                if (figure_mode) r["limit"] = row.is_limit;
            } else {
                r["error"] = row.error;
            }
            doc["rows"].push_back(std::move(r));
        }
        write_text(cfg.out, doc.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << (figure_mode ? "gamma,rho,F,limit\n" : "rho,F\n");
        for (const auto& row : rows) {
            if (figure_mode) os << g17(row.gamma) << ',';
            os << g17(row.rho) << ',';
            os << (row.error.empty() ? g17(row.value) : "nan");
            if (figure_mode) os << ',' << (row.is_limit ? 1 : 0);
            os << '\n';
        }
        write_text(cfg.out, os.str());
    }
    return bad_rows == 0 ? 0 : 1;
}

// ----- solve ---------------------------------------------------------------

json existence_json(const ExistenceVerdict& v) {
    json e;
    switch (v.status) {
        case ExistenceStatus::UniqueExists: e["status"] = "unique_exists"; break;
        case ExistenceStatus::NoneExists: e["status"] = "none_exists"; break;
        case ExistenceStatus::EigenvalueDegenerate: e["status"] = "eigenvalue_degenerate"; break;
        case ExistenceStatus::OutsideTheory: e["status"] = "outside_theory"; break;
    }
    e["rule"] = v.report.rule;
    e["holds"] = v.report.holds;
    e["abar"] = v.report.abar;
    e["ratio_target"] = v.report.ratio_target;
    e["ratio_weight"] = v.report.ratio_weight;
    if (v.report.k0) e["k0"] = *v.report.k0;
    if (v.report.exists) e["exists"] = *v.report.exists;
    return e;
}

int cmd_solve(const RunConfig& cfg, const std::string& profile_out,
              const std::string& profile_format, int profile_points, bool skip_oracle) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    {
        json prob;
        prob["kernel"] = cfg.kernel;
        if (cfg.kernel == "plaplacian") prob["p"] = cfg.p;
        prob["gamma"] = cfg.gamma;
        prob["a_plus"] = cfg.a_plus;
        prob["a_minus"] = cfg.a_minus;
        prob["tau"] = cfg.tau;
        prob["t_period"] = cfg.T;
        prob["bc"] = cfg.bc;
        doc["problem"] = prob;
    }

    int exit_code = 0;
    try {
        const auto spec = spec_of(cfg);
        const auto verdict = classify_existence(spec);
        doc["existence"] = existence_json(verdict);

        const bool attempt =
            verdict.status == ExistenceStatus::UniqueExists ||
            (verdict.status == ExistenceStatus::OutsideTheory && verdict.report.exists &&
             *verdict.report.exists);
        if (attempt) {
            const auto sol = solve_reduced(spec, cfg.quad);
            json rj;
            rj["rho"] = sol.rho;
            rj["omega"] = sol.omega;
            rj["sigma"] = sol.sigma;
            rj["alpha"] = sol.alpha;
            rj["beta"] = sol.beta;
            rj["x_star"] = sol.x_star;
            rj["y_star"] = sol.y_star;
            rj["residual_first"] = sol.residual_first;
            rj["residual_second"] = sol.residual_second;
            rj["target_first"] = sol.target_first;
            rj["target_second"] = sol.target_second;
            doc["reduced"] = rj;

            auto prof = reconstruct_neumann(sol, spec, profile_points, cfg.quad);
            if (spec.bc == BoundaryCondition::Periodic) prof = extend_periodic(prof, spec);
            json pj;
            pj["n_points"] = prof.t.size();
            pj["bc_residual_start"] = prof.diagnostics.bc_residual_start;
            pj["bc_residual_end"] = prof.diagnostics.bc_residual_end;
            pj["level_set_drift"] = prof.diagnostics.level_set_drift;
            pj["x_max"] = *std::max_element(prof.x.begin(), prof.x.end());
            pj["x_min"] = *std::min_element(prof.x.begin(), prof.x.end());
            doc["profile"] = pj;
            if (!profile_out.empty()) {
                if (profile_format == "json") {
                    json pd;
                    pd["schema_version"] = kSchemaVersion;
                    pd["bc"] = prof.bc == BoundaryCondition::Periodic ? "periodic" : "neumann";
                    pd["t"] = prof.t;
                    pd["x"] = prof.x;
                    pd["y"] = prof.y;
                    pd["diagnostics"] = {
                        {"bc_residual_start", prof.diagnostics.bc_residual_start},
                        {"bc_residual_end", prof.diagnostics.bc_residual_end},
                        {"level_set_drift", prof.diagnostics.level_set_drift}};
                    write_text(profile_out, pd.dump(2) + "\n");
                } else {
                    std::ostringstream os;
                    write_profile_csv(prof, os);
                    write_text(profile_out, os.str());
                }
            }

            if (!skip_oracle) {
                const double step = cfg.step > 0.0 ? cfg.step : cfg.T / 1e5;
                const double alpha_hat = shooting_solve_auto(
                    spec, sol.alpha / 8.0, sol.alpha * 8.0, 41, step, 1e-8, cfg.T / 2e4);
                const ProblemSpec shoot_spec =
                    spec.bc == BoundaryCondition::Periodic
                        ? ProblemSpec(spec.kernel, spec.nonlinearity, spec.half_weight(),
                                      BoundaryCondition::Neumann)
                        : spec;
                json oj;
                oj["alpha"] = alpha_hat;
                oj["alpha_delta_rel"] = std::abs(alpha_hat - sol.alpha) / sol.alpha;
                oj["terminal_residual"] =
                    shoot(sol.alpha, shoot_spec, step, false).residual_neumann();
                doc["oracle"] = oj;
            }
        }
    } catch (const std::exception& e) {
        doc["error"] = {{"code", error_code_of(e)}, {"message", e.what()}};
        exit_code = 1;
    }
    write_text(cfg.out, doc.dump(2) + "\n");
    return exit_code;
}

// ----- verify ---------------------------------------------------------------

int cmd_verify(double tol_scale) {
    const auto results = acceptance::run_all(tol_scale, &std::cout);
    for (const auto& r : results) {
        if (!r.pass) {
            std::cout << "FAILED at " << r.name << "\n";
            return 1;
        }
    }
    std::cout << "all " << results.size() << " acceptance checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive solutions of Neumann/periodic problems for phi-Laplacian "
                 "equations with a stepwise sign-changing weight"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    RunConfig cfg;
    int figure = 0;
    double rho_min = 0.0, rho_max = 0.0;
    int grid = 101;
    std::string profile_out, profile_format = "csv";
    int profile_points = 1001;
    bool skip_oracle = false;
    double tol_scale = 1.0;

    auto add_problem_opts = [&](CLI::App* sub, bool with_weight) {
        sub->add_option("--kernel", cfg.kernel, "linear | plaplacian | minkowski")
            ->check(CLI::IsMember({"linear", "plaplacian", "minkowski"}));
        sub->add_option("--p", cfg.p, "p-Laplacian exponent (requires --kernel plaplacian)");
        sub->add_option("--gamma", cfg.gamma, "nonlinearity exponent");
        sub->add_option("--a-plus", cfg.a_plus, "positive weight value");
        sub->add_option("--a-minus", cfg.a_minus, "magnitude of the negative weight value");
        if (with_weight) {
            sub->add_option("--tau", cfg.tau, "switch time");
            sub->add_option("--T", cfg.T, "interval length / period");
            sub->add_option("--bc", cfg.bc, "neumann | periodic")
                ->check(CLI::IsMember({"neumann", "periodic"}));
        }
        sub->add_option("--abs-tol", cfg.quad.abs_tol, "quadrature absolute tolerance");
        sub->add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
        sub->add_option("--max-levels", cfg.quad.max_levels, "quadrature refinement depth");
        sub->add_option("--out", cfg.out, "output path (default: stdout)");
    };

    CLI::App* curve = app.add_subcommand("curve", "sample F(rho) into CSV/JSON");
    add_problem_opts(curve, false);
    curve->add_option("--rho-min", rho_min, "lower end of the rho grid");
    curve->add_option("--rho-max", rho_max, "upper end of the rho grid");
    curve->add_option("--grid", grid, "number of rho samples");
    curve->add_option("--figure", figure, "emit the built-in reference curve families (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    curve->add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* solve = app.add_subcommand("solve", "classify, solve, and cross-check a problem");
    add_problem_opts(solve, true);
    solve->add_option("--profile-out", profile_out, "write the trajectory here");
    solve->add_option("--profile-format", profile_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--profile-points", profile_points, "trajectory grid size");
    solve->add_option("--step", cfg.step, "RK step for the oracle (default T/1e5)");
    solve->add_flag("--skip-oracle", skip_oracle, "skip the shooting cross-check");

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance matrix");
    verify->add_option("--tol-scale,--tol", tol_scale,
                       "multiply every error tolerance (0.01 = 100x tighter)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (CLI::App* sub : {curve, solve}) {
        if (sub->parsed() && sub->count("--p") > 0 && cfg.kernel != "plaplacian") {
            std::cerr << "error: --p applies to --kernel plaplacian only\n";
            return 2;
        }
    }

    try {
        if (curve->parsed()) return cmd_curve(cfg, figure, rho_min, rho_max, grid);
        if (solve->parsed())
            return cmd_solve(cfg, profile_out, profile_format, profile_points, skip_oracle);
        if (verify->parsed()) return cmd_verify(tol_scale);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
