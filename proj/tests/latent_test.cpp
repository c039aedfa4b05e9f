// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "hrlab/error.hpp"
#include "hrlab/latent.hpp"

using namespace hrlab;

namespace {

double mean_of(const LatentGrid& g) {
    double sum = 0.0;
    for (double v : g.data()) sum += v;
    return sum / static_cast<double>(g.size());
}

double variance_of(const LatentGrid& g) {
    const double m = mean_of(g);
    double ss = 0.0;
    for (double v : g.data()) ss += (v - m) * (v - m);
    return ss / static_cast<double>(g.size() - 1);
}

}  // namespace

TEST_CASE("grid construction") {
    const LatentGrid zero(2, 3, 4);
    CHECK(zero.size() == 24);
    CHECK(average_energy(zero) == 0.0);
    CHECK_THROWS_AS(LatentGrid(Shape{1, 2, 2}, {1.0, 2.0, 3.0}), ShapeError);
    CHECK_THROWS_AS(LatentGrid(Shape{1, 1, 1}, {std::nan("")}), DomainError);
    CHECK_THROWS_AS(LatentGrid(Shape{0, 2, 2}), ShapeError);
    const LatentGrid g(Shape{2, 2, 3}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(g.at(1, 0, 2) == 8.0);
    CHECK(g.plane(1).front() == 6.0);
}

TEST_CASE("noise is deterministic and stream-separated") {
    auto a = SeededRng::stream(5, NoisePurpose::Refresh, 1);
    auto b = SeededRng::stream(5, NoisePurpose::Refresh, 1);
    auto c = SeededRng::stream(5, NoisePurpose::Refresh, 2);
    auto d = SeededRng::stream(5, NoisePurpose::Initial, 1);
    const Shape shape{4, 8, 8};
    const auto ga = gaussian_noise(shape, a);
    CHECK(ga == gaussian_noise(shape, b));
    CHECK_FALSE(ga == gaussian_noise(shape, c));
    CHECK_FALSE(ga == gaussian_noise(shape, d));
}

TEST_CASE("raw generator seed 0 reproduces the standard mt19937_64 sequence") {
    std::mt19937_64 reference(0);
    SeededRng rng(0);
    const double expected = (static_cast<double>(reference() >> 11) + 1.0) / 9007199254740992.0;
    CHECK(rng.uniform() == expected);
}

TEST_CASE("standard normal statistics, 4 sigma") {
    SeededRng rng(7);
    const auto g = gaussian_noise({4, 64, 64}, rng);
    CHECK(std::abs(mean_of(g)) <= 4.0 / std::sqrt(16384.0));
    CHECK(variance_of(g) >= 0.9);
    CHECK(variance_of(g) <= 1.1);
}

TEST_CASE("forward diffusion") {
    const LatentGrid x0(Shape{1, 1, 1}, {2.0});
    const LatentGrid eps(Shape{1, 1, 1}, {1.0});
    CHECK(forward_diffuse(x0, 0.25, eps).data()[0] == doctest::Approx(1.8660254037844386).epsilon(1e-15));
    CHECK(forward_diffuse(x0, 1.0, eps) == x0);
    CHECK(forward_diffuse(x0, 0.0, eps) == eps);
    CHECK_THROWS_AS(forward_diffuse(x0, 1.5, eps), DomainError);
    CHECK_THROWS_AS(forward_diffuse(x0, 0.5, LatentGrid(1, 1, 2)), ShapeError);
}

TEST_CASE("forward diffusion is linear in x0 and eps") {
    SeededRng rng(3);
    const Shape shape{2, 4, 4};
    const auto a = gaussian_noise(shape, rng);
    const auto b = gaussian_noise(shape, rng);
    const auto e = gaussian_noise(shape, rng);
    const auto zero = LatentGrid(shape);
    const auto lhs = forward_diffuse(linear_combination(2.0, a, -3.0, b), 0.6, e);
    const auto rhs = linear_combination(
        1.0, linear_combination(2.0, forward_diffuse(a, 0.6, zero), -3.0, forward_diffuse(b, 0.6, zero)), 1.0,
        forward_diffuse(zero, 0.6, e));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        CHECK(lhs.data()[i] == doctest::Approx(rhs.data()[i]).epsilon(1e-13));
    }
}

TEST_CASE("average energy") {
    CHECK(average_energy(LatentGrid::filled({2, 3, 3}, 2.0)) == 4.0);
    CHECK(average_energy(LatentGrid(Shape{1, 2, 2}, {1, 2, 3, 4})) == 7.5);
    CHECK(mean_squared_difference(LatentGrid::filled({1, 2, 2}, 1.0), LatentGrid::filled({1, 2, 2}, 3.0)) == 4.0);
}

TEST_CASE("expected energy after forward diffusion, 1e5 draws") {
    SeededRng fixture(21);
    const auto x0 = gaussian_noise({1, 4, 4}, fixture);
    const double alpha_bar = 0.3;
    const double expected = alpha_bar * average_energy(x0) + (1.0 - alpha_bar);
    SeededRng rng(22);
    const int draws = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double e = average_energy(forward_diffuse(x0, alpha_bar, gaussian_noise(x0.shape(), rng)));
        sum += e;
        sum_sq += e * e;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sum_sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - expected) < 4.0 * sd);
}

TEST_CASE("bilinear resize") {
    const LatentGrid row(Shape{1, 1, 2}, {0.0, 1.0});
    const auto up = resize_bilinear(row, 1, 4);
    CHECK(std::vector<double>(up.data().begin(), up.data().end()) == std::vector<double>{0.0, 0.25, 0.75, 1.0});

    const auto constant = LatentGrid::filled({3, 5, 7}, 3.0);
    CHECK(resize_bilinear(constant, 13, 2) == LatentGrid::filled({3, 13, 2}, 3.0));
    CHECK(resize_nearest(constant, 10, 14) == LatentGrid::filled({3, 10, 14}, 3.0));

    SeededRng rng(4);
    const auto g = gaussian_noise({1, 4, 4}, rng);
    CHECK(resize_bilinear(g, 4, 4) == g);
    const auto big = resize_bilinear(g, 8, 8);
    CHECK(big.shape() == Shape{1, 8, 8});
    const auto [lo, hi] = std::minmax_element(g.data().begin(), g.data().end());
    for (double v : big.data()) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
    }
}

TEST_CASE("2x bilinear downscale averages aligned 2x2 blocks") {
    const LatentGrid g(Shape{1, 2, 4}, {1, 2, 3, 4, 5, 6, 7, 8});
    const auto small = resize_bilinear(g, 1, 2);
    CHECK(small.data()[0] == doctest::Approx(3.5));
    CHECK(small.data()[1] == doctest::Approx(5.5));
}

TEST_CASE("nearest resize") {
    const LatentGrid row(Shape{1, 1, 2}, {0.0, 1.0});
    const auto up = resize_nearest(row, 1, 4);
    CHECK(std::vector<double>(up.data().begin(), up.data().end()) == std::vector<double>{0.0, 0.0, 1.0, 1.0});
    CHECK(parse_resize_method("nearest") == ResizeMethod::Nearest);
    CHECK(to_string(ResizeMethod::Bilinear) == "bilinear");
    CHECK_THROWS_AS(parse_resize_method("bicubic"), ConfigError);
}

TEST_CASE("smoothing factor of 2x bilinear upsampling") {
    // Analytic value for a 64-wide axis: the two clamped edge outputs copy a source value, the
    // other 126 carry weights (1/4, 3/4) with squared sum 5/8. Per-axis mean of squared weights
    // is (2 + 126 * 5/8) / 128, and the two axes multiply.
    const double axis = (2.0 + 126.0 * 0.625) / 128.0;
    const double analytic = axis * axis;

    SeededRng rng(2026);
    double sum = 0.0;
    std::size_t count = 0;
    for (int draw = 0; draw < 16; ++draw) {
        const auto up = resize_bilinear(gaussian_noise({4, 64, 64}, rng), 128, 128);
        for (double v : up.data()) sum += v * v;
        count += up.size();
    }
    REQUIRE(count >= 1000000);
    const double rho = sum / static_cast<double>(count);

    constexpr double kFrozenRho = 0.397803232;
    CHECK(rho == doctest::Approx(kFrozenRho).epsilon(1e-8));
    CHECK(rho < 1.0);
    // Output cells are correlated; 1% is far beyond the sampling spread at 2^20 elements.
    CHECK(rho == doctest::Approx(analytic).epsilon(0.01));
}
