// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <sstream>

#include <doctest.h>

#include "hrlab/cli/verify.hpp"

using namespace hrlab;
using namespace hrlab::cli;

TEST_CASE("every check passes on the default schedule") {
    const auto results = run_checks({});
    CHECK(results.size() == 13);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
    std::ostringstream out;
    CHECK(print_report(results, out));
    CHECK(out.str().find("snr.near-unity") != std::string::npos);
}

TEST_CASE("a corrupted schedule fails") {
    VerifyOptions options;
    std::reverse(options.schedule.alpha_bar.begin(), options.schedule.alpha_bar.end());
    const auto results = run_checks(options);
    const auto it = std::find_if(results.begin(), results.end(),
                                 [](const CheckResult& r) { return r.name == "schedule.alpha_bar"; });
    REQUIRE(it != results.end());
    CHECK_FALSE(it->passed);
    std::ostringstream out;
    CHECK_FALSE(print_report(results, out));
}
