// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hrlab/denoiser.hpp"
#include "hrlab/schedule.hpp"

namespace hrlab::cli {

/// Final p_x0 = a * x_T + b * mu, elementwise, for a baseline run with a GaussianPrior.
struct AffineMap {
    double a = 0.0;
    double b = 0.0;
};

/// Composes the per-step scalar recurrences of a single-stage run with a GaussianPrior into one
/// affine map. Guidance cannot change the result because both branches of the prior agree, so
/// `omega` only needs to be finite. Throws OracleError for other denoisers, multi-stage plans, or a
/// prior whose mean does not match the plan's resolution.
AffineMap affine_trajectory_oracle(const RefreshPlan& plan, const SamplerTimeline& timeline, const Denoiser& denoiser,
                                   double omega);

/// x_prev from the DDIM step with both alpha_bars replaced by their SNR-corrected values.
double snr_step_direct(double x, double eps, double alpha_bar_t, double alpha_bar_prev, double gamma);

/// The same step written as x_coef * x + e_coef * eps on the uncorrected alpha_bars, with
/// D(a) = gamma - (gamma - 1) * a:
///   x_coef = sqrt(D_t / D_prev) * sqrt(a_prev / a_t)
///   e_coef = sqrt(gamma / D_prev) * (sqrt(1 - a_prev) - sqrt(a_prev) * sqrt(1 - a_t) / sqrt(a_t))
struct SnrCoefficients {
    double x_coef = 0.0;
    double e_coef = 0.0;
    double ratio = 0.0;   ///< sqrt(D_t / D_prev), near one for adjacent steps
    double second = 0.0;  ///< gamma / D_prev, within [1, gamma]
};

SnrCoefficients snr_coefficients(double alpha_bar_t, double alpha_bar_prev, double gamma);

}  // namespace hrlab::cli
