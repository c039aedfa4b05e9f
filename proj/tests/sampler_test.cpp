// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "hrlab/cli/oracle.hpp"
#include "hrlab/error.hpp"
#include "hrlab/sampler.hpp"
#include "hrlab/toy_data.hpp"

using namespace hrlab;

namespace {

LatentGrid scalar(double v) { return LatentGrid(Shape{1, 1, 1}, {v}); }

const SamplerTimeline& timeline50() {
    static const SamplerTimeline tl = build_timeline(default_schedule(), 50);
    return tl;
}

const DatasetPrior& small_toy() {
    static const DatasetPrior prior = [] {
        ToyDatasetOptions o;
        o.shapes = 4;
        return make_toy_dataset(o);
    }();
    return prior;
}

/// Counts calls and can fail at a chosen step.
class ProbeDenoiser final : public Denoiser {
public:
    explicit ProbeDenoiser(int fail_at) : fail_at_(fail_at) {}
    LatentGrid predict_eps(const LatentGrid& x, const StepContext& ctx, const Condition&) const override {
        if (ctx.step == fail_at_) throw DenoiserError("probe failure");
        return LatentGrid(x.shape());
    }

private:
    int fail_at_;
};

}  // namespace

TEST_CASE("ddim step examples") {
    const auto r = ddim_step(scalar(1.0), scalar(0.0), 0.25, 0.64);
    CHECK(r.p_x0.data()[0] == 2.0);
    CHECK(r.x_prev.data()[0] == doctest::Approx(1.6).epsilon(1e-15));

    SeededRng rng(1);
    const auto x = gaussian_noise({2, 4, 4}, rng);
    const auto e = gaussian_noise({2, 4, 4}, rng);
    const auto terminal = ddim_step(x, e, 0.9, 1.0);
    CHECK(terminal.x_prev == terminal.p_x0);

    const auto step = ddim_step(x, e, 0.3, 0.5);
    const auto rebuilt = forward_diffuse(step.p_x0, 0.3, e);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(rebuilt.data()[i] == doctest::Approx(x.data()[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ddim_step(x, e, 0.0, 0.5), SingularityError);
    CHECK_THROWS_AS(ddim_step(x, e, 0.3, 1.5), DomainError);
    CHECK_THROWS_AS(ddim_step(x, scalar(0.0), 0.3, 0.5), ShapeError);
}

TEST_CASE("noise refresh") {
    const IdentityCodec codec;
    SeededRng rng(2);
    const auto p = gaussian_noise({4, 8, 8}, rng);
    CHECK(noise_refresh(p, codec, {16, 16}, ResizeMethod::Bilinear, 1.0, LatentGrid(4, 16, 16)) ==
          resize_bilinear(p, 16, 16));
    const auto eps = gaussian_noise({4, 8, 8}, rng);
    CHECK(noise_refresh(p, codec, {8, 8}, ResizeMethod::Bilinear, 0.4, eps) == forward_diffuse(p, 0.4, eps));
    const auto big = gaussian_noise({4, 16, 16}, rng);
    CHECK(noise_refresh(p, codec, {16, 16}, ResizeMethod::Bilinear, 0.4, big).shape() == Shape{4, 16, 16});
    CHECK_THROWS_AS(noise_refresh(p, codec, {16, 16}, ResizeMethod::Bilinear, 0.4, eps), ShapeError);
}

TEST_CASE("variant names") {
    for (auto v : {Variant::Baseline, Variant::NativeBaseline, Variant::Rectified, Variant::RefreshOnly,
                   Variant::LatentResize, Variant::SnrCorrected}) {
        CHECK(parse_variant(to_string(v)) == v);
    }
    CHECK_THROWS_AS(parse_variant("ddpm"), ConfigError);
}

TEST_CASE("rectified paper-2048 trace layout") {
    const auto plan = build_plan(ladder_preset("paper-2048", {16, 16}), timeline50());
    RunOptions o;
    o.seed = 3;
    o.condition = Condition::of_class(2);
    o.snapshot_steps = {38, 39, 40, 41};
    const IdentityCodec codec;
    const auto r = run(plan, timeline50(), small_toy(), codec, o);
    REQUIRE(r.trace.size() == 50);
    for (const auto& row : r.trace) {
        CHECK(row.step == static_cast<int>(&row - r.trace.data()));
        CHECK(row.train_t == timeline50().step_to_train_t[static_cast<std::size_t>(row.step)]);
        CHECK(row.omega == (row.step < 40 ? 5.0 : 30.0));
        CHECK(row.refreshed == (row.step == 40));
    }
    CHECK(r.final_p_x0.shape() == Shape{4, 32, 32});
    REQUIRE(r.snapshots.size() == 4);
    CHECK(r.snapshots[1].p_x0.shape() == Shape{4, 16, 16});
    CHECK(r.snapshots[2].p_x0.shape() == Shape{4, 32, 32});
    CHECK(r == run(plan, timeline50(), small_toy(), codec, o));
}

TEST_CASE("refresh consumes the boundary prediction") {
    const auto plan = build_plan(ladder_preset("paper-2048", {16, 16}), timeline50());
    RunOptions o;
    o.seed = 4;
    o.condition = Condition::of_class(0);
    o.snapshot_steps = {39};
    const IdentityCodec codec;
    const auto r = run(plan, timeline50(), small_toy(), codec, o);
    auto rng = SeededRng::stream(4, NoisePurpose::Refresh, 1);
    const auto eps = gaussian_noise({4, 32, 32}, rng);
    const auto expected = noise_refresh(r.snapshots[0].p_x0, codec, {32, 32}, ResizeMethod::Bilinear,
                                        timeline50().alpha_bar_at_step[40], eps);
    CHECK(r.trace[40].latent_energy == doctest::Approx(average_energy(expected)).epsilon(1e-14));
}

TEST_CASE("single-stage rectified equals baseline") {
    LadderConfig c;
    c.n_stages = 1;
    c.t_min = 0;
    c.t_max = 50;
    c.omega_min = 5.0;
    c.omega_max = 5.0;
    c.resolutions = {{16, 16}};
    const auto plan = build_plan(c, timeline50());
    const IdentityCodec codec;
    RunOptions o;
    o.seed = 5;
    o.condition = Condition::of_class(1);
    o.variant = Variant::Rectified;
    const auto rect = run(plan, timeline50(), small_toy(), codec, o);
    o.variant = Variant::Baseline;
    CHECK(rect == run(plan, timeline50(), small_toy(), codec, o));
}

TEST_CASE("effective plans per variant") {
    const auto plan = build_plan(ladder_preset("paper-4096", {8, 8}), timeline50());
    CHECK(effective_plan(Variant::Baseline, plan) == single_stage_plan({8, 8}, 5.0, 50));
    CHECK(effective_plan(Variant::NativeBaseline, plan) == single_stage_plan({32, 32}, 5.0, 50));
    CHECK(effective_plan(Variant::SnrCorrected, plan) == single_stage_plan({32, 32}, 5.0, 50));
    const auto flat = effective_plan(Variant::RefreshOnly, plan);
    for (const auto& s : flat.stages) CHECK(s.omega == 5.0);
    CHECK(flat.refresh_steps() == plan.refresh_steps());
    CHECK(effective_plan(Variant::Rectified, plan) == plan);
}

TEST_CASE("latent-resize changes shape without re-noising") {
    const auto plan = build_plan(ladder_preset("paper-2048", {16, 16}), timeline50());
    const IdentityCodec codec;
    RunOptions o;
    o.seed = 6;
    o.condition = Condition::of_class(3);
    o.variant = Variant::LatentResize;
    const auto resized = run(plan, timeline50(), small_toy(), codec, o);
    o.variant = Variant::Rectified;
    const auto rect = run(plan, timeline50(), small_toy(), codec, o);
    CHECK(resized.final_p_x0.shape() == Shape{4, 32, 32});
    CHECK(resized.trace[40].refreshed);
    for (int s = 0; s < 40; ++s) CHECK(resized.trace[s] == rect.trace[s]);
    CHECK(resized.trace[40].latent_energy != rect.trace[40].latent_energy);
}

TEST_CASE("snr-corrected runs at the target resolution") {
    const auto plan = build_plan(ladder_preset("paper-2048", {8, 8}), timeline50());
    const IdentityCodec codec;
    RunOptions o;
    o.seed = 7;
    o.variant = Variant::SnrCorrected;
    const GaussianPrior prior(LatentGrid::filled({4, 16, 16}, 0.3), 0.5);
    const auto r = run(plan, timeline50(), prior, codec, o);
    CHECK(r.final_p_x0.shape() == Shape{4, 16, 16});
    for (const auto& row : r.trace) CHECK_FALSE(row.refreshed);
    o.variant = Variant::NativeBaseline;
    CHECK_FALSE(r == run(plan, timeline50(), prior, codec, o));
}

TEST_CASE("errors carry the failing step") {
    const auto plan = single_stage_plan({4, 4}, 1.0, 50);
    const IdentityCodec codec;
    RunOptions o;
    try {
        run(plan, timeline50(), ProbeDenoiser(17), codec, o);
        FAIL("expected StepError");
    } catch (const StepError& e) {
        CHECK(e.step() == 17);
        CHECK(std::string(e.what()).find("probe failure") != std::string::npos);
    }
    CHECK_THROWS_AS(run(single_stage_plan({4, 4}, 1.0, 40), timeline50(), ProbeDenoiser(-1), codec, o), ConfigError);
    o.initial_latent = LatentGrid(4, 8, 8);
    CHECK_THROWS_AS(run(plan, timeline50(), ProbeDenoiser(-1), codec, o), ShapeError);
}

TEST_CASE("reconstruction check passes on every step") {
    const auto plan = build_plan(ladder_preset("paper-4096", {8, 8}), timeline50());
    const IdentityCodec codec;
    RunOptions o;
    o.check_reconstruction = true;
    o.condition = Condition::of_class(0);
    CHECK_NOTHROW(run(plan, timeline50(), small_toy(), codec, o));
}

TEST_CASE("Gaussian baseline final statistics, 1e4 runs") {
    // Single 1x2x2 grid so 10^4 runs stay fast; per-element mean and variance against the oracle.
    const Shape shape{1, 2, 2};
    const LatentGrid mu(shape, {0.5, -1.0, 2.0, 0.0});
    const double var0 = 0.3;
    const GaussianPrior prior(mu, var0);
    const auto plan = single_stage_plan(shape.resolution(), 1.0, 50);
    const auto map = cli::affine_trajectory_oracle(plan, timeline50(), prior, 1.0);
    const IdentityCodec codec;

    const int runs = 10000;
    std::vector<double> sum(4, 0.0);
    std::vector<double> sum_sq(4, 0.0);
    RunOptions o;
    o.channels = 1;
    o.variant = Variant::Baseline;
    for (int r = 0; r < runs; ++r) {
        o.seed = static_cast<std::uint64_t>(r);
        const auto out = run(plan, timeline50(), prior, codec, o);
        for (std::size_t i = 0; i < 4; ++i) {
            sum[i] += out.final_p_x0.data()[i];
            sum_sq[i] += out.final_p_x0.data()[i] * out.final_p_x0.data()[i];
        }
    }
    // The final p_x0 is a * x_T + b * mu with x_T standard normal.
    const double sd = std::abs(map.a);
    for (std::size_t i = 0; i < 4; ++i) {
        const double mean = sum[i] / runs;
        const double variance = (sum_sq[i] - runs * mean * mean) / (runs - 1);
        CHECK(std::abs(mean - map.b * mu.data()[i]) <= 4.0 * sd / std::sqrt(static_cast<double>(runs)));
        CHECK(variance >= 0.9 * map.a * map.a);
        CHECK(variance <= 1.1 * map.a * map.a);
    }
}
