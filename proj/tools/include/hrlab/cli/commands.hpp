// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hrlab/analysis.hpp"
#include "hrlab/cli/config.hpp"

namespace hrlab::cli {

/// Prints the refresh steps, guidance weights and stage table; writes <output_dir>/ladder.csv.
void cmd_ladder(const ExperimentConfig& config, std::ostream& out);

/// Runs run_count seeds starting at run.seed. Per seed writes trace_<seed>.csv, final_<seed>.rhrt,
/// snapshot_<seed>_<step>.rhrt for each snapshot step and, with two or more snapshots,
/// p_x0_mse_<seed>.csv. Seeds run on up to run.jobs threads.
void cmd_sample(const ExperimentConfig& config, std::ostream& out);

/// Mean energy curve per (variant, omega) over run_count seeds. Labels are the variant name, or
/// "<variant>@omega=<w>" when [energy] omegas is set; an omega replaces every stage's weight.
std::vector<EnergyTrace> energy_curves(const ExperimentConfig& config);

/// Writes energy_curves.csv (label,step,mean_energy).
void cmd_energy_curve(const ExperimentConfig& config, std::ostream& out);

/// Returns true when every check passed.
bool cmd_verify(std::uint64_t seed, std::ostream& out);

/// One binary PGM per channel, min-max scaled to 0..255; a constant channel maps to 128. A
/// single-channel grid writes `output` itself, otherwise <stem>_c<k><ext>.
std::vector<std::filesystem::path> cmd_dump_grid(const std::filesystem::path& input, const std::filesystem::path& output);

/// 8-bit pixels of one channel plane under the dump-grid scaling.
std::vector<std::uint8_t> to_gray(std::span<const double> plane);

/// "{:.9g}" formatting shared by every CSV writer.
std::string format_real(double value);

}  // namespace hrlab::cli
