// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hrlab/analysis.hpp"
#include "hrlab/cli/oracle.hpp"
#include "hrlab/error.hpp"
#include "hrlab/sampler.hpp"
#include "hrlab/tensor_file.hpp"
#include "hrlab/toy_data.hpp"

namespace hrlab::cli {

namespace {

using Outcome = std::pair<bool, std::string>;

CheckResult check(std::string name, const std::function<Outcome()>& body) {
    try {
        auto [passed, detail] = body();
        return {std::move(name), passed, std::move(detail)};
    } catch (const std::exception& e) {
        return {std::move(name), false, std::string("threw: ") + e.what()};
    }
}

Outcome schedule_values(const NoiseSchedule& schedule) {
    const auto& ab = schedule.alpha_bar;
    if (ab.size() != static_cast<std::size_t>(schedule.train_steps)) {
        return {false, "alpha_bar has the wrong length"};
    }
    for (std::size_t t = 0; t < ab.size(); ++t) {
        if (!(ab[t] > 0.0 && ab[t] < 1.0)) {
            return {false, fmt::format("alpha_bar[{}] = {} outside (0, 1)", t, ab[t])};
        }
        if (t > 0 && !(ab[t] < ab[t - 1])) {
            return {false, fmt::format("alpha_bar not strictly decreasing at t = {}", t)};
        }
    }
    return {true, fmt::format("{} values, strictly decreasing in (0, 1)", ab.size())};
}

Outcome timeline_values(const NoiseSchedule& schedule, int num_steps) {
    const auto timeline = build_timeline(schedule, num_steps);
    const auto& t = timeline.step_to_train_t;
    if (t.front() != schedule.train_steps - 1 || t.back() != 0) {
        return {false, fmt::format("endpoints {} .. {}", t.front(), t.back())};
    }
    if (timeline.alpha_bar_at_step.back() != 1.0) {
        return {false, "post-terminal alpha_bar is not 1"};
    }
    for (std::size_t s = 0; s < t.size(); ++s) {
        if (timeline.alpha_bar_at_step[s] != schedule.alpha_bar[static_cast<std::size_t>(t[s])]) {
            return {false, fmt::format("alpha_bar_at_step[{}] disagrees with the schedule", s)};
        }
        if (!(timeline.alpha_bar_at_step[s + 1] > timeline.alpha_bar_at_step[s])) {
            return {false, fmt::format("alpha_bar_at_step not increasing at step {}", s)};
        }
    }
    return {true, fmt::format("{} steps, t = {} .. 0", num_steps, t.front())};
}

Outcome preset_values(const std::string& name, const std::vector<int>& steps, const std::vector<double>& omegas) {
    const auto config = ladder_preset(name, {16, 16});
    const auto got_steps = select_refresh_steps(config);
    const auto got_omegas = select_omegas(config);
    bool ok = got_steps == steps && got_omegas.size() == omegas.size();
    double worst = 0.0;
    for (std::size_t i = 0; ok && i < omegas.size(); ++i) {
        worst = std::max(worst, std::abs(got_omegas[i] - omegas[i]));
    }
    ok = ok && worst <= 1e-9;
    return {ok, fmt::format("T = [{}], omega = [{:.10g}], max omega error {:.3g}", fmt::join(got_steps, ", "),
                            fmt::join(got_omegas, ", "), worst)};
}

Outcome snr_identity(std::uint64_t seed) {
    SeededRng rng = SeededRng::stream(seed, NoisePurpose::Fixture, 101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a_t = rng.uniform() * 0.998 + 0.001;
        const double a_p = a_t + (1.0 - a_t) * rng.uniform();
        const double gamma = 1.0 + 15.0 * rng.uniform();
        const double x = rng.normal();
        const double eps = rng.normal();
        const auto c = snr_coefficients(a_t, a_p, gamma);
        const double rewritten = c.x_coef * x + c.e_coef * eps;
        const double direct = snr_step_direct(x, eps, a_t, a_p, gamma);
        const double scale = std::abs(c.x_coef * x) + std::abs(c.e_coef * eps);
        worst = std::max(worst, std::abs(rewritten - direct) / scale);
    }
    return {worst < 1e-12, fmt::format("1000 triples, max relative error {:.3g}", worst)};
}

Outcome snr_second_coefficient(std::uint64_t seed) {
    SeededRng rng = SeededRng::stream(seed, NoisePurpose::Fixture, 102);
    for (int i = 0; i < 1000; ++i) {
        const double a_t = rng.uniform() * 0.999;
        const double a_p = a_t + (1.0 - a_t) * rng.uniform();
        const double gamma = 1.0 + 15.0 * rng.uniform();
        const double second = snr_coefficients(a_t, a_p, gamma).second;
        if (!(second >= 1.0 && second <= gamma)) {
            return {false, fmt::format("coefficient {} outside [1, {}]", second, gamma)};
        }
    }
    return {true, "1000 triples within [1, gamma]"};
}

Outcome snr_monotonicity() {
    for (double gamma : {1.5, 4.0, 16.0}) {
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double value = snr_corrected_alpha_bar(i / 100.0, gamma);
            if (!(value > prev) || value > i / 100.0) {
                return {false, fmt::format("not increasing or exceeds alpha_bar at {} (gamma {})", i / 100.0, gamma)};
            }
            prev = value;
        }
    }
    for (double ab : {0.1, 0.5, 0.9}) {
        double prev = 2.0;
        for (int g = 1; g <= 16; ++g) {
            const double value = snr_corrected_alpha_bar(ab, g);
            if (!(value < prev)) {
                return {false, fmt::format("not decreasing in gamma at alpha_bar {}", ab)};
            }
            prev = value;
        }
    }
    return {true, "increasing in alpha_bar, decreasing in gamma"};
}

Outcome gaussian_oracle(const SamplerTimeline& timeline, std::uint64_t seed) {
    const Shape shape{4, 8, 8};
    SeededRng mean_rng = SeededRng::stream(seed, NoisePurpose::Fixture, 103);
    const GaussianPrior prior(gaussian_noise(shape, mean_rng), 0.5);
    const RefreshPlan plan = single_stage_plan(shape.resolution(), 1.0, timeline.num_steps);
    const AffineMap map = affine_trajectory_oracle(plan, timeline, prior, 1.0);
    const IdentityCodec codec;

    double worst = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        RunOptions options;
        options.variant = Variant::Baseline;
        options.channels = shape.channels;
        options.seed = seed + r;
        SeededRng rng = SeededRng::stream(seed + r, NoisePurpose::Initial, 0);
        const LatentGrid x_T = gaussian_noise(shape, rng);
        const RunResult result = run(plan, timeline, prior, codec, options);
        const LatentGrid expected = linear_combination(map.a, x_T, map.b, prior.mean());
        const double error = std::sqrt(mean_squared_difference(result.final_p_x0, expected));
        const double scale = std::sqrt(average_energy(expected));
        worst = std::max(worst, error / scale);
    }
    return {worst <= 1e-9, fmt::format("100 initial noises, a = {:.6g}, b = {:.6g}, max relative error {:.3g}", map.a,
                                       map.b, worst)};
}

Outcome snr_gamma_one(const SamplerTimeline& timeline, std::uint64_t seed) {
    const Shape shape{4, 8, 8};
    SeededRng mean_rng = SeededRng::stream(seed, NoisePurpose::Fixture, 104);
    const GaussianPrior prior(gaussian_noise(shape, mean_rng), 0.5);
    const RefreshPlan plan = single_stage_plan(shape.resolution(), 3.0, timeline.num_steps);
    const IdentityCodec codec;
    RunOptions options;
    options.channels = shape.channels;
    options.seed = seed;
    options.variant = Variant::Baseline;
    const RunResult baseline = run(plan, timeline, prior, codec, options);
    options.variant = Variant::SnrCorrected;
    const RunResult corrected = run(plan, timeline, prior, codec, options);
    return {baseline == corrected, baseline == corrected ? "bit-identical" : "results differ"};
}

Outcome refresh_distribution(const SamplerTimeline& timeline, std::uint64_t seed) {
    const Shape shape{4, 64, 64};
    SeededRng fixture = SeededRng::stream(seed, NoisePurpose::Fixture, 105);
    const LatentGrid p_x0 = gaussian_noise(shape, fixture);
    const double ab = timeline.alpha_bar_at_step[static_cast<std::size_t>(timeline.num_steps * 4 / 5)];
    const IdentityCodec codec;
    const double root = std::sqrt(ab);

    std::vector<double> residuals;
    for (std::uint64_t k = 0; k < 8; ++k) {
        SeededRng rng = SeededRng::stream(seed, NoisePurpose::Refresh, k + 1);
        const LatentGrid eps = gaussian_noise(shape, rng);
        const LatentGrid refreshed = noise_refresh(p_x0, codec, shape.resolution(), ResizeMethod::Bilinear, ab, eps);
        for (std::size_t i = 0; i < refreshed.size(); ++i) {
            residuals.push_back(refreshed.data()[i] - root * p_x0.data()[i]);
        }
    }
    const ZTest z = z_test_mean_var(residuals, 0.0, 1.0 - ab);
    const bool ok = std::abs(z.z_mean) < 4.0 && z.var_ratio >= 0.95 && z.var_ratio <= 1.05;
    return {ok, fmt::format("{} elements at alpha_bar {:.6g}: z = {:.3f}, variance ratio = {:.4f}", residuals.size(), ab,
                            z.z_mean, z.var_ratio)};
}

Outcome reconstruction(const SamplerTimeline& timeline, std::uint64_t seed) {
    ToyDatasetOptions toy;
    toy.shapes = 4;
    const DatasetPrior prior = make_toy_dataset(toy);
    const RefreshPlan plan = build_plan(ladder_preset("paper-2048", {16, 16}), timeline);
    const IdentityCodec codec;
    RunOptions options;
    options.seed = seed;
    options.condition = Condition::of_class(1);
    options.check_reconstruction = true;
    const RunResult first = run(plan, timeline, prior, codec, options);
    const RunResult second = run(plan, timeline, prior, codec, options);
    if (!(first == second)) {
        return {false, "repeated run differs"};
    }
    return {true, fmt::format("{} steps within 1e-9, repeated run bit-identical", first.trace.size())};
}

Outcome tensor_round_trip(std::uint64_t seed) {
    SeededRng rng = SeededRng::stream(seed, NoisePurpose::Fixture, 106);
    const LatentGrid grid = gaussian_noise({3, 5, 7}, rng);
    const Tensor tensor = grid_to_tensor(grid);
    const auto bytes = encode_tensor(tensor);
    const Tensor back = decode_tensor(bytes);
    const bool ok = back.dims == tensor.dims && back.values == tensor.values && encode_tensor(back) == bytes &&
                    grid_to_tensor(tensor_to_grid(back)).values == tensor.values;
    return {ok, fmt::format("{} bytes", bytes.size())};
}

}  // namespace

double snr_ratio_deviation(const SamplerTimeline& timeline) {
    double worst = 0.0;
    for (int g = 0; g <= 60; ++g) {
        const double gamma = 1.0 + 0.25 * g;
        for (int s = 0; s < timeline.num_steps; ++s) {
            const auto k = static_cast<std::size_t>(s);
            const double ratio =
                snr_coefficients(timeline.alpha_bar_at_step[k], timeline.alpha_bar_at_step[k + 1], gamma).ratio;
            worst = std::max(worst, std::abs(ratio - 1.0));
        }
    }
    return worst;
}

std::vector<CheckResult> run_checks(const VerifyOptions& options) {
    const auto timeline = [&] { return build_timeline(options.schedule, options.num_steps); };
    const std::uint64_t seed = options.seed;
    std::vector<CheckResult> results;
    results.push_back(check("schedule.alpha_bar", [&] { return schedule_values(options.schedule); }));
    results.push_back(check("schedule.timeline", [&] { return timeline_values(options.schedule, options.num_steps); }));
    results.push_back(check("ladder.paper-2048", [] { return preset_values("paper-2048", {40}, {5.0, 30.0}); }));
    results.push_back(check("ladder.paper-4096", [] {
        return preset_values("paper-4096", {40, 45}, {5.0, 45.0 * std::sqrt(0.5) + 5.0, 50.0});
    }));
    results.push_back(check("snr.identity", [&] { return snr_identity(seed); }));
    results.push_back(check("snr.second-coefficient", [&] { return snr_second_coefficient(seed); }));
    results.push_back(check("snr.near-unity", [&] {
        const double deviation = snr_ratio_deviation(timeline());
        return Outcome{deviation < 0.2, fmt::format("max |ratio - 1| = {:.9g}", deviation)};
    }));
    results.push_back(check("snr.monotonicity", [] { return snr_monotonicity(); }));
    results.push_back(check("oracle.gaussian-baseline", [&] { return gaussian_oracle(timeline(), seed); }));
    results.push_back(check("sampler.snr-gamma-one", [&] { return snr_gamma_one(timeline(), seed); }));
    results.push_back(check("refresh.distribution", [&] { return refresh_distribution(timeline(), seed); }));
    results.push_back(check("sampler.reconstruction", [&] { return reconstruction(timeline(), seed); }));
    results.push_back(check("tensor.round-trip", [&] { return tensor_round_trip(seed); }));
    return results;
}

bool print_report(const std::vector<CheckResult>& results, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& r : results) {
        width = std::max(width, r.name.size());
    }
    std::size_t failed = 0;
    for (const auto& r : results) {
        out << fmt::format("{:<{}}  {}  {}\n", r.name, width, r.passed ? "PASS" : "FAIL", r.detail);
        failed += r.passed ? 0 : 1;
    }
    out << fmt::format("{} checks, {} failed\n", results.size(), failed);
    return failed == 0;
}

}  // namespace hrlab::cli
