// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrlab/shape.hpp"

namespace hrlab {

enum class ScheduleKind { Linear, ScaledLinear };

ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ScheduleKind kind);

/// Cumulative signal fraction alpha_bar[t] = prod_{j <= t} (1 - beta[j]) over training timesteps.
struct NoiseSchedule {
    ScheduleKind kind = ScheduleKind::ScaledLinear;
    double beta_start = 0.0;
    double beta_end = 0.0;
    int train_steps = 0;
    std::vector<double> alpha_bar;
};

inline constexpr double kDefaultBetaStart = 0.00085;
inline constexpr double kDefaultBetaEnd = 0.012;
inline constexpr int kDefaultTrainSteps = 1000;
inline constexpr int kDefaultSamplingSteps = 50;

/// Linear interpolates beta; scaled-linear interpolates sqrt(beta) and squares.
/// Throws ConfigError unless 0 < beta_start <= beta_end < 1 and train_steps >= 1.
NoiseSchedule build_schedule(ScheduleKind kind, double beta_start, double beta_end, int train_steps);

/// Scaled-linear, 0.00085 -> 0.012 over 1000 steps.
NoiseSchedule default_schedule();

/// Maps sampling steps (0 = noisiest) to training timesteps.
struct SamplerTimeline {
    int num_steps = 0;
    std::vector<int> step_to_train_t;
    /// num_steps + 1 entries; the last is the post-terminal value 1.0.
    std::vector<double> alpha_bar_at_step;
};

/// Endpoint-inclusive uniform spacing, rounded half away from zero:
/// t(s) = round((num_steps - 1 - s) * (train_steps - 1) / (num_steps - 1)).
SamplerTimeline build_timeline(const NoiseSchedule& schedule, int num_steps);

/// Refresh-ladder hyperparameters.
struct LadderConfig {
    int t_min = 0;
    int t_max = 0;
    int n_stages = 1;
    double m_t = 1.0;
    double omega_min = 1.0;
    double omega_max = 1.0;
    double m_omega = 1.0;
    /// One per stage, non-decreasing.
    std::vector<Resolution> resolutions;
};

/// Checks the ladder invariants. `num_steps` bounds t_max when given; `granularity` must divide
/// every resolution. Throws ConfigError naming the field.
void validate_ladder(const LadderConfig& config, std::optional<int> num_steps = std::nullopt, int granularity = 1);

/// Built-in presets: "paper-2048" (two stages, base and 2x) and "paper-4096" (three stages,
/// base, 2x and 4x). `base` is the stage-0 resolution.
LadderConfig ladder_preset(std::string_view name, Resolution base);
std::vector<std::string> ladder_preset_names();

/// T_i = floor((t_max - t_min) * ((i - 1) / N)^m_t + t_min) for i in [1, N).
std::vector<int> select_refresh_steps(const LadderConfig& config);

/// omega_i = (omega_max - omega_min) * (i / (N - 1))^m_omega + omega_min for i in [0, N); N = 1 gives [omega_min].
std::vector<double> select_omegas(const LadderConfig& config);

struct Stage {
    Resolution resolution;
    double omega = 1.0;
    int first_step = 0;  ///< inclusive
    int last_step = 0;   ///< exclusive

    friend bool operator==(const Stage&, const Stage&) = default;
};

/// Per-stage resolution, guidance weight and step range. Stages tile [0, num_steps).
struct RefreshPlan {
    std::vector<Stage> stages;

    int num_steps() const { return stages.empty() ? 0 : stages.back().last_step; }
    /// First step of every stage after the first.
    std::vector<int> refresh_steps() const;
    const Stage& stage_at(int step) const;
    std::size_t stage_index_at(int step) const;

    friend bool operator==(const RefreshPlan&, const RefreshPlan&) = default;
};

/// Throws PlanningError when two refresh steps collide or fall outside (0, num_steps).
RefreshPlan build_plan(const LadderConfig& config, const SamplerTimeline& timeline);

/// Single stage over the whole timeline.
RefreshPlan single_stage_plan(Resolution resolution, double omega, int num_steps);

/// alpha_bar / (gamma - (gamma - 1) * alpha_bar). Throws DomainError for gamma < 1 or alpha_bar outside [0, 1].
double snr_corrected_alpha_bar(double alpha_bar, double gamma);

/// (H'/H * W'/W)^2.
double snr_gamma(Resolution base, Resolution target);

}  // namespace hrlab
