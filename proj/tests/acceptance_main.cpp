// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cstdlib>
#include <iostream>

#include "phibvp/acceptance.hpp"

int main(int argc, char** argv) {
    double tol_scale = 1.0;
    if (argc > 1) tol_scale = std::atof(argv[1]);
    const auto results = phibvp::acceptance::run_all(tol_scale, &std::cout);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures) {
        std::cout << failures << " of " << results.size() << " acceptance checks failed\n";
        return 1;
    }
    std::cout << "all " << results.size() << " acceptance checks passed\n";
    return 0;
}
