// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrlab/error.hpp"

namespace hrlab {

namespace {

double norm(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

void check_reconstruction(int step, const LatentGrid& x_t, const DdimStepResult& result, const LatentGrid& eps,
                          double alpha_bar_t) {
    const LatentGrid rebuilt = forward_diffuse(result.p_x0, alpha_bar_t, eps);
    const double error = std::sqrt(mean_squared_difference(rebuilt, x_t) * static_cast<double>(x_t.size()));
    const double scale = std::max(norm(x_t.data()), 1e-300);
    if (error > 1e-9 * scale) {
        throw StepError(step, "reconstruction identity violated, relative error " + std::to_string(error / scale));
    }
}

}  // namespace

Variant parse_variant(std::string_view name) {
    if (name == "baseline") return Variant::Baseline;
    if (name == "native-baseline") return Variant::NativeBaseline;
    if (name == "rectified") return Variant::Rectified;
    if (name == "rectified-no-rect") return Variant::RefreshOnly;
    if (name == "latent-resize") return Variant::LatentResize;
    if (name == "snr-corrected") return Variant::SnrCorrected;
    throw ConfigError("unknown variant '" + std::string(name) + "'", "run.variant");
}

std::string_view to_string(Variant variant) {
    switch (variant) {
        case Variant::Baseline: return "baseline";
        case Variant::NativeBaseline: return "native-baseline";
        case Variant::Rectified: return "rectified";
        case Variant::RefreshOnly: return "rectified-no-rect";
        case Variant::LatentResize: return "latent-resize";
        case Variant::SnrCorrected: return "snr-corrected";
    }
    return "unknown";
}

DdimStepResult ddim_step(const LatentGrid& x_t, const LatentGrid& eps, double alpha_bar_t, double alpha_bar_prev) {
    if (alpha_bar_t == 0.0) {
        throw SingularityError("ddim_step: alpha_bar_t = 0 has no predicted x0");
    }
    if (!(alpha_bar_t > 0.0 && alpha_bar_t <= 1.0)) {
        throw DomainError("ddim_step: alpha_bar_t must lie in (0, 1], got " + std::to_string(alpha_bar_t));
    }
    if (!(alpha_bar_prev > 0.0 && alpha_bar_prev <= 1.0)) {
        throw DomainError("ddim_step: alpha_bar_prev must lie in (0, 1], got " + std::to_string(alpha_bar_prev));
    }
    require_same_shape(x_t, eps, "ddim_step");

    const double root_t = std::sqrt(alpha_bar_t);
    const double sigma_t = std::sqrt(1.0 - alpha_bar_t);
    const double root_prev = std::sqrt(alpha_bar_prev);
    const double sigma_prev = std::sqrt(1.0 - alpha_bar_prev);

    DdimStepResult result{LatentGrid(x_t.shape()), LatentGrid(x_t.shape())};
    auto x = x_t.data();
    auto e = eps.data();
    auto p = result.p_x0.data();
    auto out = result.x_prev.data();
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = (x[i] - sigma_t * e[i]) / root_t;
        out[i] = root_prev * p[i] + sigma_prev * e[i];
    }
    return result;
}

LatentGrid noise_refresh(const LatentGrid& p_x0, const Codec& codec, Resolution target, ResizeMethod method,
                         double alpha_bar_prev, const LatentGrid& eps) {
    const LatentGrid enlarged = codec.refresh_resize(p_x0, target, method);
    require_same_shape(enlarged, eps, "noise_refresh");
    return forward_diffuse(enlarged, alpha_bar_prev, eps);
}

RefreshPlan effective_plan(Variant variant, const RefreshPlan& plan) {
    if (plan.stages.empty()) {
        throw ConfigError("plan has no stages", "ladder");
    }
    const Stage& first = plan.stages.front();
    const Stage& last = plan.stages.back();
    switch (variant) {
        case Variant::Baseline:
            return single_stage_plan(first.resolution, first.omega, plan.num_steps());
        case Variant::NativeBaseline:
        case Variant::SnrCorrected:
            return single_stage_plan(last.resolution, first.omega, plan.num_steps());
        case Variant::RefreshOnly: {
            RefreshPlan flat = plan;
            for (auto& stage : flat.stages) {
                stage.omega = first.omega;
            }
            return flat;
        }
        case Variant::Rectified:
        case Variant::LatentResize:
            return plan;
    }
    return plan;
}

RunResult run(const RefreshPlan& plan, const SamplerTimeline& timeline, const Denoiser& denoiser, const Codec& codec,
              const RunOptions& options) {
    if (plan.stages.empty() || plan.num_steps() != timeline.num_steps || plan.stages.front().first_step != 0) {
        throw ConfigError("plan covers " + std::to_string(plan.num_steps()) + " steps but the timeline has " +
                              std::to_string(timeline.num_steps),
                          "ladder");
    }
    for (std::size_t i = 1; i < plan.stages.size(); ++i) {
        if (plan.stages[i].first_step != plan.stages[i - 1].last_step) {
            throw ConfigError("plan stages must tile the timeline without gaps", "ladder");
        }
    }
    if (options.channels < 1) {
        throw ConfigError("must be a positive integer", "run.channels");
    }

    const RefreshPlan stages = effective_plan(options.variant, plan);
    const double gamma = options.variant == Variant::SnrCorrected
                             ? snr_gamma(plan.stages.front().resolution, plan.stages.back().resolution)
                             : 1.0;
    const auto adjusted = [&](double alpha_bar) {
        return options.variant == Variant::SnrCorrected ? snr_corrected_alpha_bar(alpha_bar, gamma) : alpha_bar;
    };

    const Resolution start = stages.stages.front().resolution;
    const Shape start_shape{options.channels, start.height, start.width};
    LatentGrid x;
    if (options.initial_latent) {
        if (options.initial_latent->shape() != start_shape) {
            throw ShapeError("initial latent " + options.initial_latent->shape().to_string() + " does not match " +
                             start_shape.to_string());
        }
        x = *options.initial_latent;
    } else {
        auto rng = SeededRng::stream(options.seed, NoisePurpose::Initial, 0);
        x = gaussian_noise(start_shape, rng);
    }

    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(timeline.num_steps));
    bool refreshed = false;
    LatentGrid p_x0;

    for (std::size_t k = 0; k < stages.stages.size(); ++k) {
        const Stage& stage = stages.stages[k];
        try {
            denoiser.prepare(x.shape());
        } catch (const StepError&) {
            throw;
        } catch (const Error& e) {
            throw StepError(stage.first_step, e.what());
        }

        for (int s = stage.first_step; s < stage.last_step; ++s) {
            const auto idx = static_cast<std::size_t>(s);
            const double alpha_bar_t = adjusted(timeline.alpha_bar_at_step[idx]);
            const double alpha_bar_prev = adjusted(timeline.alpha_bar_at_step[idx + 1]);
            const StepContext context{s, timeline.step_to_train_t[idx], timeline.alpha_bar_at_step[idx]};

            StepRecord record{s, context.train_t, stage.omega, average_energy(x), 0.0, refreshed};
            refreshed = false;

            DdimStepResult next;
            try {
                const LatentGrid eps_uncond = denoiser.predict_eps(x, context, Condition::unconditional());
                const LatentGrid eps = options.condition.is_unconditional()
                                           ? cfg_combine(eps_uncond, eps_uncond, stage.omega)
                                           : cfg_combine(eps_uncond, denoiser.predict_eps(x, context, options.condition),
                                                         stage.omega);
                next = ddim_step(x, eps, alpha_bar_t, alpha_bar_prev);
                if (options.check_reconstruction) {
                    check_reconstruction(s, x, next, eps, alpha_bar_t);
                }
            } catch (const StepError&) {
                throw;
            } catch (const Error& e) {
                throw StepError(s, e.what());
            }

            record.p_x0_energy = average_energy(next.p_x0);
            result.trace.push_back(record);
            if (std::find(options.snapshot_steps.begin(), options.snapshot_steps.end(), s) !=
                options.snapshot_steps.end()) {
                result.snapshots.push_back({s, next.p_x0});
            }
            x = std::move(next.x_prev);
            p_x0 = std::move(next.p_x0);
        }

        if (k + 1 == stages.stages.size()) {
            break;
        }
        const Stage& upcoming = stages.stages[k + 1];
        const int boundary_step = stage.last_step - 1;
        try {
            if (options.variant == Variant::LatentResize) {
                x = resize(x, upcoming.resolution, options.resize_method);
            } else {
                const double alpha_bar_next = adjusted(timeline.alpha_bar_at_step[static_cast<std::size_t>(upcoming.first_step)]);
                auto rng = SeededRng::stream(options.seed, NoisePurpose::Refresh, k + 1);
                const LatentGrid eps = gaussian_noise(
                    Shape{options.channels, upcoming.resolution.height, upcoming.resolution.width}, rng);
                x = noise_refresh(p_x0, codec, upcoming.resolution, options.resize_method, alpha_bar_next, eps);
            }
        } catch (const StepError&) {
            throw;
        } catch (const Error& e) {
            throw StepError(boundary_step, e.what());
        }
        refreshed = true;
    }

    result.final_p_x0 = std::move(p_x0);
    return result;
}

}  // namespace hrlab
