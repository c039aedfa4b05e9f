// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "hrlab/analysis.hpp"
#include "hrlab/error.hpp"

using namespace hrlab;

namespace {

EnergyTrace make_trace(std::string label, std::vector<std::pair<int, double>> rows) {
    EnergyTrace t{std::move(label), {}};
    for (auto [s, e] : rows) t.rows.push_back({s, e});
    return t;
}

// Brute-force tau-b from its definition, independent of the library's pair loop.
double tau_b_reference(const std::vector<std::pair<double, double>>& p) {
    double nc = 0, nd = 0, n1 = 0, n2 = 0, n0 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double sx = (p[i].first > p[j].first) - (p[i].first < p[j].first);
            const double sy = (p[i].second > p[j].second) - (p[i].second < p[j].second);
            n0 += 1;
            if (sx == 0) n1 += 1;
            if (sy == 0) n2 += 1;
            if (sx * sy > 0) nc += 1;
            if (sx * sy < 0) nd += 1;
        }
    }
    return (nc - nd) / std::sqrt((n0 - n1) * (n0 - n2));
}

}  // namespace

TEST_CASE("mean trace and window mean") {
    const auto a = make_trace("a", {{0, 1.0}, {1, 2.0}, {2, 3.0}});
    const auto b = make_trace("b", {{0, 3.0}, {1, 4.0}, {2, 5.0}});
    const std::vector<EnergyTrace> both{a, b};
    const auto m = mean_trace(both, "mean");
    CHECK(m.label == "mean");
    CHECK(m.rows[1].energy == 3.0);
    CHECK(window_mean(m, 1, 3) == 3.5);
    CHECK_THROWS_AS(window_mean(m, 5, 9), ComparisonError);
    const std::vector<EnergyTrace> mismatched{a, make_trace("c", {{0, 1.0}})};
    CHECK_THROWS_AS(mean_trace(mismatched, "x"), ComparisonError);
}

TEST_CASE("compare traces") {
    const auto ref = make_trace("native", {{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 4.0}});
    const auto cand = make_trace("refresh", {{0, 1.0}, {1, 1.0}, {2, 2.5}, {3, 3.0}});
    const auto c = compare_traces(ref, cand, 2);
    REQUIRE(c.per_step_gap.size() == 2);
    CHECK(c.per_step_gap[0].step == 2);
    CHECK(c.per_step_gap[0].gap == 0.5);
    CHECK(c.mean_gap_after == 0.75);
    CHECK_THROWS_AS(compare_traces(ref, cand, 9), ComparisonError);
    CHECK_THROWS_AS(compare_traces(ref, make_trace("short", {{0, 1.0}, {2, 1.0}, {4, 1.0}}), 2), ComparisonError);
}

TEST_CASE("trace from run") {
    RunResult r;
    r.trace.push_back({0, 999, 5.0, 1.5, 0.5, false});
    r.trace.push_back({1, 979, 5.0, 1.25, 0.5, false});
    const auto t = trace_from_run(r, "x");
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[1].energy == 1.25);
    CHECK_THROWS_AS(trace_from_run(RunResult{}, "empty"), ComparisonError);
}

TEST_CASE("p_x0 MSE series splits at shape changes") {
    std::vector<Snapshot> snaps;
    snaps.push_back({0, LatentGrid::filled({1, 2, 2}, 0.0)});
    snaps.push_back({1, LatentGrid::filled({1, 2, 2}, 1.0)});
    snaps.push_back({2, LatentGrid::filled({1, 2, 2}, 3.0)});
    snaps.push_back({3, LatentGrid::filled({1, 4, 4}, 3.0)});
    snaps.push_back({4, LatentGrid::filled({1, 4, 4}, 3.5)});
    const auto series = p_x0_mse_series(snaps);
    REQUIRE(series.size() == 2);
    CHECK(series[0].size() == 2);
    CHECK(series[0][0].step == 1);
    CHECK(series[0][1].mse == 4.0);
    CHECK(series[1][0].step == 4);
    CHECK(series[1][0].mse == 0.25);
    CHECK_THROWS_AS(p_x0_mse_series(std::vector<Snapshot>(snaps.begin(), snaps.begin() + 1)), StatisticError);
}

TEST_CASE("Kendall tau-b") {
    const std::vector<std::pair<double, double>> up{{1, 1}, {3, 2}, {5, 3}, {10, 4}};
    CHECK(monotonicity_stat(up) == 1.0);
    const std::vector<std::pair<double, double>> down{{1, 4}, {3, 3}, {5, 2}, {10, 1}};
    CHECK(monotonicity_stat(down) == -1.0);
    const std::vector<std::pair<double, double>> ties{{1, 5}, {5, 5}, {10, 6}};
    CHECK(monotonicity_stat(ties) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(monotonicity_stat(ties) == doctest::Approx(0.816496580927726).epsilon(1e-14));
    const std::vector<std::pair<double, double>> two{{1, 1}, {3, 2}, {3, 3}};
    CHECK_THROWS_AS(monotonicity_stat(two), StatisticError);
}

TEST_CASE("tau-b agrees with the reference on random data") {
    SeededRng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> p;
        for (int i = 0; i < 12; ++i) {
            p.push_back({std::floor(rng.uniform() * 5.0), std::floor(rng.uniform() * 4.0)});
        }
        double tau = 0.0;
        try {
            tau = monotonicity_stat(p);
        } catch (const StatisticError&) {
            continue;
        }
        CHECK(tau == doctest::Approx(tau_b_reference(p)).epsilon(1e-12));
    }
}

TEST_CASE("z test") {
    std::vector<double> exact(10000, 2.0);
    const auto z = z_test_mean_var(exact, 2.0, 0.7);
    CHECK(z.z_mean == 0.0);
    CHECK(z.var_ratio == 0.0);

    std::vector<double> small(10000, 1.0);
    std::vector<double> large(40000, 1.0);
    const double z_small = z_test_mean_var(small, 0.0, 1.0).z_mean;
    const double z_large = z_test_mean_var(large, 0.0, 1.0).z_mean;
    CHECK(z_large == doctest::Approx(2.0 * z_small).epsilon(1e-12));

    SeededRng rng(9);
    std::vector<double> normal;
    for (int i = 0; i < 100000; ++i) normal.push_back(3.0 + 2.0 * rng.normal());
    const auto zn = z_test_mean_var(normal, 3.0, 4.0);
    CHECK(std::abs(zn.z_mean) < 4.0);
    CHECK(zn.var_ratio == doctest::Approx(1.0).epsilon(0.03));

    CHECK_THROWS_AS(z_test_mean_var(std::vector<double>(9999, 0.0), 0.0, 1.0), StatisticError);
    CHECK_THROWS_AS(z_test_mean_var(exact, 0.0, 0.0), StatisticError);
}
