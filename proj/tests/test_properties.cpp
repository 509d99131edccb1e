#include <catch2/catch_amalgamated.hpp>

#include "slowlight/checks.hpp"

using namespace slowlight;

TEST_CASE("full invariant suite passes on the default configuration") {
    RunConfig cfg;
    const auto results = run_all_checks(cfg, 4);
    REQUIRE(results.size() == 8);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}
