// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hrlab/codec.hpp"
#include "hrlab/denoiser.hpp"
#include "hrlab/latent.hpp"
#include "hrlab/schedule.hpp"

namespace hrlab {

enum class Variant {
    /// Stage-0 resolution throughout, omega = stage-0 omega.
    Baseline,
    /// Last-stage resolution throughout, omega = stage-0 omega.
    NativeBaseline,
    /// Noise refresh at every plan boundary with the plan's per-stage omega.
    Rectified,
    /// Noise refresh at every plan boundary, omega held at the stage-0 value.
    RefreshOnly,
    /// Resizes the noisy latent directly at plan boundaries; no decode/encode, no re-noising.
    LatentResize,
    /// Last-stage resolution throughout with SNR-corrected alpha_bar, gamma from the plan's first and last resolutions.
    SnrCorrected,
};

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant variant);

struct DdimStepResult {
    LatentGrid x_prev;
    LatentGrid p_x0;
};

/// Deterministic DDIM update:
///   p_x0   = (x_t - sqrt(1 - ab_t) * eps) / sqrt(ab_t)
///   x_prev = sqrt(ab_prev) * p_x0 + sqrt(1 - ab_prev) * eps
/// Throws SingularityError for ab_t = 0 and DomainError outside (0, 1].
DdimStepResult ddim_step(const LatentGrid& x_t, const LatentGrid& eps, double alpha_bar_t, double alpha_bar_prev);

/// sqrt(ab_prev) * codec.refresh_resize(p_x0) + sqrt(1 - ab_prev) * eps.
LatentGrid noise_refresh(const LatentGrid& p_x0, const Codec& codec, Resolution target, ResizeMethod method,
                         double alpha_bar_prev, const LatentGrid& eps);

struct StepRecord {
    int step = 0;
    int train_t = 0;
    double omega = 0.0;
    double latent_energy = 0.0;  ///< energy of x_t entering the step
    double p_x0_energy = 0.0;
    bool refreshed = false;      ///< x_t was produced by a stage transition

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Snapshot {
    int step = 0;
    LatentGrid p_x0;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct RunResult {
    LatentGrid final_p_x0;
    std::vector<StepRecord> trace;
    std::vector<Snapshot> snapshots;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct RunOptions {
    Variant variant = Variant::Rectified;
    int channels = 4;
    Condition condition = Condition::unconditional();
    std::uint64_t seed = 0;
    std::vector<int> snapshot_steps;
    ResizeMethod resize_method = ResizeMethod::Bilinear;
    /// Replaces the seeded initial noise. Must match the variant's starting shape.
    std::optional<LatentGrid> initial_latent;
    /// Verifies sqrt(ab_t) p_x0 + sqrt(1 - ab_t) eps = x_t (1e-9 relative) at every step.
    bool check_reconstruction = false;
};

/// Stages a variant actually executes for `plan`.
RefreshPlan effective_plan(Variant variant, const RefreshPlan& plan);

/// Runs one sampling trajectory. Initial noise comes from SeededRng::stream(seed, Initial, 0);
/// refresh noise for stage i from SeededRng::stream(seed, Refresh, i).
///
/// A refresh at boundary T consumes the p_x0 of step T - 1 and replaces that step's x_prev,
/// re-noised to alpha_bar at step T. The first prediction at the new resolution happens at step T.
RunResult run(const RefreshPlan& plan, const SamplerTimeline& timeline, const Denoiser& denoiser, const Codec& codec,
              const RunOptions& options);

}  // namespace hrlab
