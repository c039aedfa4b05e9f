// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hrlab/schedule.hpp"

namespace hrlab::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Schedule every check runs against. Tests swap in a corrupted one as a negative control.
    NoiseSchedule schedule = default_schedule();
    int num_steps = kDefaultSamplingSteps;
    std::uint64_t seed = 0;
};

/// Schedule identities, ladder presets, SNR-correction algebra, the affine trajectory oracle,
/// noise-refresh statistics, reconstruction and tensor-file round trips. A check that throws is
/// recorded as failed and the suite continues.
std::vector<CheckResult> run_checks(const VerifyOptions& options);

/// Largest |sqrt(D_t / D_prev) - 1| over adjacent steps of `timeline` and gamma in [1, 16].
double snr_ratio_deviation(const SamplerTimeline& timeline);

/// Prints one row per check; returns true when all passed.
bool print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace hrlab::cli
