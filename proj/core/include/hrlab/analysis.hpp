// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrlab/sampler.hpp"

namespace hrlab {

struct EnergyRow {
    int step = 0;
    double energy = 0.0;

    friend bool operator==(const EnergyRow&, const EnergyRow&) = default;
};

/// Average latent energy per sampling step. Steps strictly increase.
struct EnergyTrace {
    std::string label;
    std::vector<EnergyRow> rows;
};

struct GapRow {
    int step = 0;
    double gap = 0.0;
};

struct CurveComparison {
    std::string reference_label;
    std::string candidate_label;
    std::vector<GapRow> per_step_gap;
    int window_start = 0;
    double mean_gap_after = 0.0;
};

EnergyTrace trace_from_run(const RunResult& result, std::string label);

/// Per-step mean over several traces with identical step sets.
EnergyTrace mean_trace(std::span<const EnergyTrace> traces, std::string label);

/// Mean energy over rows with first <= step < last.
double window_mean(const EnergyTrace& trace, int first, int last);

/// gap(step) = reference - candidate for every step >= window_start present in both.
/// Throws ComparisonError when either trace does not cover the window or the step sets disagree on it.
CurveComparison compare_traces(const EnergyTrace& reference, const EnergyTrace& candidate, int window_start);

struct MseRow {
    int step = 0;  ///< step of the later snapshot
    double mse = 0.0;
};

/// Mean squared difference between consecutive snapshots. A shape change (a refresh boundary)
/// ends one segment and starts the next, so the result may hold several segments.
std::vector<std::vector<MseRow>> p_x0_mse_series(std::span<const Snapshot> snapshots);

/// Kendall tau-b between the two coordinates. Needs at least three distinct first coordinates.
double monotonicity_stat(std::span<const std::pair<double, double>> pairs);

struct ZTest {
    double z_mean = 0.0;
    double var_ratio = 0.0;
};

/// z of the sample mean against `expected_mean` and the ratio of the (n - 1) sample variance to
/// `expected_var`. Needs at least 10^4 samples.
ZTest z_test_mean_var(std::span<const double> samples, double expected_mean, double expected_var);

inline constexpr std::size_t kMinZTestSamples = 10000;

}  // namespace hrlab
