// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrlab/codec.hpp"
#include "hrlab/denoiser.hpp"
#include "hrlab/sampler.hpp"
#include "hrlab/schedule.hpp"
#include "hrlab/toy_data.hpp"

namespace hrlab::cli {

struct ScheduleBlock {
    ScheduleKind kind = ScheduleKind::ScaledLinear;
    double beta_start = kDefaultBetaStart;
    double beta_end = kDefaultBetaEnd;
    int train_steps = kDefaultTrainSteps;
    int num_steps = kDefaultSamplingSteps;
};

struct LadderBlock {
    std::optional<std::string> preset;
    /// Resolved ladder, from the preset or the explicit keys.
    LadderConfig config;
};

enum class DenoiserKind { Gaussian, Dataset, Toy, Zero };

struct DenoiserBlock {
    DenoiserKind kind = DenoiserKind::Toy;
    double mean_value = 0.0;
    double variance = 1.0;
    std::filesystem::path path;
    std::filesystem::path labels_path;
    bool conditional = false;
    ToyDatasetOptions toy;
};

enum class CodecKind { Identity, External };

struct CodecBlock {
    CodecKind kind = CodecKind::Identity;
    std::string command;
    std::filesystem::path workdir;
    int granularity = 1;
    ResizeMethod resize = ResizeMethod::Bilinear;
};

struct RunBlock {
    Variant variant = Variant::Rectified;
    std::uint64_t seed = 0;
    int run_count = 1;
    int channels = 4;
    /// Empty = no snapshots.
    std::vector<int> snapshot_steps;
    /// "cycle" picks the seed's class round-robin; otherwise a fixed label. Ignored when unconditional.
    std::optional<int> label;
    std::filesystem::path output_dir = "out";
    int jobs = 1;
};

struct EnergyBlock {
    std::vector<Variant> variants;
    std::vector<double> omegas;
};

/// Sectioned key=value experiment description.
///
///   [schedule] kind, beta_start, beta_end, train_steps, num_steps
///   [ladder]   preset, base_height, base_width | t_min, t_max, n_stages, m_t, omega_min, omega_max,
///              m_omega, resolutions (e.g. "16x16, 32x32")
///   [denoiser] kind = gaussian (mean_value, variance) | dataset (path, labels_path, conditional)
///              | toy (height, width, shapes, classes, coarse, detail_amplitude, data_seed, conditional) | zero
///   [codec]    kind = identity | external (command, workdir, granularity); resize = bilinear | nearest
///   [run]      variant, seed, run_count, channels, snapshot_steps ("all" or a list), label, output_dir, jobs
///   [energy]   variants, omegas
struct ExperimentConfig {
    ScheduleBlock schedule;
    LadderBlock ladder;
    DenoiserBlock denoiser;
    CodecBlock codec;
    RunBlock run;
    EnergyBlock energy;
};

/// Throws ConfigError naming the offending "section.key".
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Everything a run needs, built from a validated config.
struct Experiment {
    ExperimentConfig config;
    NoiseSchedule schedule;
    SamplerTimeline timeline;
    RefreshPlan plan;
    std::unique_ptr<Denoiser> denoiser;
    std::unique_ptr<Codec> codec;
    /// Class labels the denoiser knows, ascending; empty when unconditional.
    std::vector<int> classes;

    Condition condition_for_seed(std::uint64_t seed) const;
};

Experiment build_experiment(const ExperimentConfig& config);

/// Loads dataset points from an RHRT file of shape (N, C, H, W) and optional whitespace-separated labels.
DatasetPrior load_dataset(const std::filesystem::path& points, const std::filesystem::path& labels);

}  // namespace hrlab::cli
