// Acceptance suite: runs every built-in scenario, one per acceptance gate,
// prints a single pass/fail line per criterion, and exits with the number of
// failed criteria.

#include <cstdio>
#include <cstring>
#include <string>

#include "pdpsim/scenarios.hpp"

int main(int argc, char** argv) {
    pdpsim::ScenarioContext ctx;
    ctx.out_dir = "acceptance_out";
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
            ctx.out_dir = argv[++i];
        } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            ctx.threads = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr,
                         "usage: %s [--out DIR] [--threads N] [--criterion N]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    for (const auto& sc : pdpsim::scenario_registry()) {
        if (only != 0 && sc.criterion != only) continue;
        pdpsim::ScenarioOutcome outcome;
        try {
            outcome = sc.run(ctx);
        } catch (const std::exception& e) {
            std::printf("FAIL criterion %2d [%s]: exception: %s\n", sc.criterion, sc.name.c_str(),
                        e.what());
            ++failures;
            continue;
        }
        std::printf("%s criterion %2d [%s]: %s (%.1f s) %s\n",
                    outcome.passed ? "PASS" : "FAIL", outcome.criterion, outcome.name.c_str(),
                    outcome.gate.c_str(), outcome.wall_seconds, outcome.metrics.dump().c_str());
        std::fflush(stdout);
        if (!outcome.passed) ++failures;
    }
    return failures;
}
