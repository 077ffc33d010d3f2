#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef PHIBVP_CLI_PATH
#error "PHIBVP_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string(PHIBVP_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("unknown subcommand and bad flags exit 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("curve --no-such-flag 1").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    // --p only makes sense with the p-Laplacian kernel
    CHECK(run_cli("curve --p 3 --gamma 2 --a-plus 1 --a-minus 2 --rho-min 0.1 "
                  "--rho-max 1 --grid 5").exit_code == 2);
}

TEST_CASE("curve output is deterministic") {
    const std::string args =
        "curve --gamma 3 --a-plus 1 --a-minus 2 --rho-min 0.1 --rho-max 1.9 --grid 31";
    const auto a = run_cli(args + " --out cli_curve_a.csv");
    const auto b = run_cli(args + " --out cli_curve_b.csv");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    const std::string fa = slurp("cli_curve_a.csv");
    const std::string fb = slurp("cli_curve_b.csv");
    CHECK(fa == fb);
    CHECK(fa.substr(0, 6) == "rho,F\n");
    std::remove("cli_curve_a.csv");
    std::remove("cli_curve_b.csv");
}

TEST_CASE("figure mode emits limits instead of clamping") {
    const auto r = run_cli("curve --figure 1 --out cli_fig1.csv");
    REQUIRE(r.exit_code == 0);
    std::ifstream in("cli_fig1.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "gamma,rho,F,limit");
    int limit_rows = 0;
    int checked = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string g, rho, f, lim;
        std::getline(row, g, ',');
        std::getline(row, rho, ',');
        std::getline(row, f, ',');
        std::getline(row, lim, ',');
        if (lim == "1") {
            ++limit_rows;
            const double rv = std::stod(rho);
            CHECK((rv == 0.0 || rv == 2.0));
        }
        if (std::stod(g) == 0.8 && std::stod(rho) == 0.2) {
            CHECK(std::stod(f) == Catch::Approx(1.03488).margin(5e-4));
            ++checked;
        }
        if (std::stod(g) == 0.0 && std::stod(rho) == 1.0) {
            CHECK(std::stod(f) == Catch::Approx(2.0).margin(1e-8));
            ++checked;
        }
    }
    CHECK(limit_rows == 10);  // both boundary rows for each of 5 curves
    CHECK(checked == 2);
    std::remove("cli_fig1.csv");
}

TEST_CASE("figure 2 rows include the identity curve") {
    const auto r = run_cli("curve --figure 2 --out cli_fig2.csv");
    REQUIRE(r.exit_code == 0);
    std::ifstream in("cli_fig2.csv");
    std::string line;
    std::getline(in, line);
    int checked = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string g, rho, f, lim;
        std::getline(row, g, ',');
        std::getline(row, rho, ',');
        std::getline(row, f, ',');
        std::getline(row, lim, ',');
        if (std::stod(g) == -3.0 && std::stod(rho) == 20.0) {
            CHECK(std::stod(f) == Catch::Approx(20.0).margin(1e-8));
            CHECK(lim == "0");
            ++checked;
        }
        if (std::stod(g) == -1.5 && std::stod(rho) == 5.0) {
            CHECK(std::stod(f) == Catch::Approx(13.4742).margin(5e-3));
            ++checked;
        }
    }
    CHECK(checked == 2);
    std::remove("cli_fig2.csv");
}

TEST_CASE("solve report for a unique solution") {
    const auto r = run_cli(
        "solve --gamma 3 --a-plus 1 --a-minus 2 --tau 1 --T 3 --out cli_solve.json "
        "--profile-out cli_profile.csv --profile-points 101");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp("cli_solve.json"));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["existence"]["status"] == "unique_exists");
    CHECK(doc["existence"]["holds"] == true);
    CHECK(doc["reduced"]["rho"].get<double>() == Catch::Approx(0.110051606161).epsilon(1e-9));
    CHECK(doc["reduced"]["alpha"].get<double>() == Catch::Approx(0.702180946860).epsilon(1e-9));
    CHECK(doc["oracle"]["alpha_delta_rel"].get<double>() < 1e-6);
    CHECK(doc["profile"]["level_set_drift"].get<double>() < 1e-6);
    CHECK(doc.count("error") == 0);

    const std::string prof = slurp("cli_profile.csv");
    CHECK(prof.substr(0, 6) == "t,x,y\n");
    std::remove("cli_solve.json");
    std::remove("cli_profile.csv");
}

TEST_CASE("solve report for a nonexistence verdict") {
    const auto r = run_cli(
        "solve --gamma -3 --a-plus 1 --a-minus 2 --tau 1 --T 3 --out cli_none.json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp("cli_none.json"));
    CHECK(doc["existence"]["status"] == "none_exists");
    CHECK(doc.count("reduced") == 0);
    CHECK(doc.count("error") == 0);
    std::remove("cli_none.json");
}

TEST_CASE("solve reports the degenerate family as a machine-readable error") {
    // abar = 0: classification says a family exists, the solver refuses
    const auto r = run_cli(
        "solve --gamma 0 --a-plus 1 --a-minus 2 --tau 2 --T 3 --out cli_degen.json");
    CHECK(r.exit_code == 1);
    const auto doc = nlohmann::json::parse(slurp("cli_degen.json"));
    CHECK(doc["error"]["code"] == "degenerate_family");
    std::remove("cli_degen.json");
}

TEST_CASE("periodic solve emits a full-period profile") {
    const auto r = run_cli(
        "solve --gamma 3 --a-plus 1 --a-minus 2 --tau 1 --T 3 --bc periodic "
        "--out cli_periodic.json --profile-out cli_periodic.csv --profile-points 201");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp("cli_periodic.json"));
    CHECK(doc["existence"]["status"] == "unique_exists");
    CHECK(doc["reduced"]["target_first"].get<double>() == Catch::Approx(0.5));
    const std::string csv = slurp("cli_periodic.csv");
    // last row ends at t = 3 and matches the first row's state
    const auto first_row = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) -
                                                              csv.find('\n') - 1);
    const auto last_nl = csv.find_last_of('\n', csv.size() - 2);
    const auto last_row = csv.substr(last_nl + 1);
    const auto x_of = [](const std::string& row) {
        const auto c1 = row.find(',');
        const auto c2 = row.find(',', c1 + 1);
        return row.substr(c1 + 1, c2 - c1 - 1);
    };
    CHECK(x_of(first_row) == x_of(last_row));
    std::remove("cli_periodic.json");
    std::remove("cli_periodic.csv");
}

TEST_CASE("solve maps argument errors to exit 1 with a code") {
    const auto r = run_cli(
        "solve --kernel plaplacian --p 0.5 --gamma 3 --a-plus 1 --a-minus 2 --tau 1 --T 3 "
        "--out cli_badp.json");
    CHECK(r.exit_code == 1);
    const auto doc = nlohmann::json::parse(slurp("cli_badp.json"));
    CHECK(doc["error"]["code"] == "invalid_argument");
    std::remove("cli_badp.json");
}

TEST_CASE("minkowski solve reports unsupported") {
    const auto r = run_cli(
        "solve --kernel minkowski --gamma 3 --a-plus 1 --a-minus 2 --tau 1 --T 3 "
        "--out cli_mink.json");
    REQUIRE(r.exit_code == 0);  // classification only: outside the theory
    const auto doc = nlohmann::json::parse(slurp("cli_mink.json"));
    CHECK(doc["existence"]["status"] == "outside_theory");
    CHECK(doc.count("reduced") == 0);
    std::remove("cli_mink.json");
}
