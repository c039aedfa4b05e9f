// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/cli/oracle.hpp"

#include <cmath>

#include "hrlab/error.hpp"

namespace hrlab::cli {

AffineMap affine_trajectory_oracle(const RefreshPlan& plan, const SamplerTimeline& timeline, const Denoiser& denoiser,
                                   double omega) {
    const auto* prior = dynamic_cast<const GaussianPrior*>(&denoiser);
    if (!prior) {
        throw OracleError("affine trajectory oracle needs a GaussianPrior denoiser");
    }
    if (plan.stages.size() != 1) {
        throw OracleError("affine trajectory oracle needs a single-stage plan, got " +
                          std::to_string(plan.stages.size()) + " stages");
    }
    if (plan.num_steps() != timeline.num_steps) {
        throw OracleError("plan and timeline disagree on the step count");
    }
    if (prior->mean().resolution() != plan.stages.front().resolution) {
        throw OracleError("prior mean is " + prior->mean().resolution().to_string() + " but the plan runs at " +
                          plan.stages.front().resolution.to_string());
    }
    if (!std::isfinite(omega)) {
        throw OracleError("omega must be finite");
    }

    const double v = prior->variance();
    // x = A * x_T + B * mu.
    double A = 1.0;
    double B = 0.0;
    AffineMap p{0.0, 0.0};
    for (int s = 0; s < timeline.num_steps; ++s) {
        const double ab = timeline.alpha_bar_at_step[static_cast<std::size_t>(s)];
        const double ab_prev = timeline.alpha_bar_at_step[static_cast<std::size_t>(s) + 1];
        const double root = std::sqrt(ab);
        const double sigma = std::sqrt(1.0 - ab);
        const double gain = root * v / (ab * v + 1.0 - ab);

        const double m_a = gain * A;
        const double m_b = 1.0 + gain * (B - root);
        const double e_a = (A - root * m_a) / sigma;
        const double e_b = (B - root * m_b) / sigma;

        p.a = (A - sigma * e_a) / root;
        p.b = (B - sigma * e_b) / root;
        A = std::sqrt(ab_prev) * p.a + std::sqrt(1.0 - ab_prev) * e_a;
        B = std::sqrt(ab_prev) * p.b + std::sqrt(1.0 - ab_prev) * e_b;
    }
    return p;
}

double snr_step_direct(double x, double eps, double alpha_bar_t, double alpha_bar_prev, double gamma) {
    const double at = snr_corrected_alpha_bar(alpha_bar_t, gamma);
    const double ap = snr_corrected_alpha_bar(alpha_bar_prev, gamma);
    const double p_x0 = (x - std::sqrt(1.0 - at) * eps) / std::sqrt(at);
    return std::sqrt(ap) * p_x0 + std::sqrt(1.0 - ap) * eps;
}

SnrCoefficients snr_coefficients(double alpha_bar_t, double alpha_bar_prev, double gamma) {
    const double d_t = gamma - (gamma - 1.0) * alpha_bar_t;
    const double d_p = gamma - (gamma - 1.0) * alpha_bar_prev;
    SnrCoefficients c;
    c.ratio = std::sqrt(d_t / d_p);
    c.second = gamma / d_p;
    c.x_coef = c.ratio * std::sqrt(alpha_bar_prev / alpha_bar_t);
    c.e_coef = std::sqrt(c.second) * (std::sqrt(1.0 - alpha_bar_prev) -
                                      std::sqrt(alpha_bar_prev) * std::sqrt(1.0 - alpha_bar_t) / std::sqrt(alpha_bar_t));
    return c;
}

}  // namespace hrlab::cli
