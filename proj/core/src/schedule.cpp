// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/schedule.hpp"

#include <cmath>
#include <string>

#include "hrlab/error.hpp"

namespace hrlab {

ScheduleKind parse_schedule_kind(std::string_view name) {
    if (name == "linear") return ScheduleKind::Linear;
    if (name == "scaled-linear") return ScheduleKind::ScaledLinear;
    throw ConfigError("unknown schedule kind '" + std::string(name) + "' (expected linear or scaled-linear)",
                      "schedule.kind");
}

std::string_view to_string(ScheduleKind kind) {
    return kind == ScheduleKind::Linear ? "linear" : "scaled-linear";
}

NoiseSchedule build_schedule(ScheduleKind kind, double beta_start, double beta_end, int train_steps) {
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
        throw ConfigError("need 0 < beta_start <= beta_end < 1, got " + std::to_string(beta_start) + " and " +
                              std::to_string(beta_end),
                          "schedule.beta_start");
    }
    if (train_steps < 1) {
        throw ConfigError("must be at least 1, got " + std::to_string(train_steps), "schedule.train_steps");
    }

    NoiseSchedule schedule{kind, beta_start, beta_end, train_steps, {}};
    schedule.alpha_bar.reserve(static_cast<std::size_t>(train_steps));

    const double lo = kind == ScheduleKind::Linear ? beta_start : std::sqrt(beta_start);
    const double hi = kind == ScheduleKind::Linear ? beta_end : std::sqrt(beta_end);
    double product = 1.0;
    for (int t = 0; t < train_steps; ++t) {
        const double frac = train_steps == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(train_steps - 1);
        double beta = lo + (hi - lo) * frac;
        if (kind == ScheduleKind::ScaledLinear) {
            beta *= beta;
        }
        product *= 1.0 - beta;
        schedule.alpha_bar.push_back(product);
    }
    return schedule;
}

NoiseSchedule default_schedule() {
    return build_schedule(ScheduleKind::ScaledLinear, kDefaultBetaStart, kDefaultBetaEnd, kDefaultTrainSteps);
}

SamplerTimeline build_timeline(const NoiseSchedule& schedule, int num_steps) {
    if (num_steps < 1) {
        throw ConfigError("must be at least 1, got " + std::to_string(num_steps), "schedule.num_steps");
    }
    if (num_steps > schedule.train_steps) {
        throw ConfigError("num_steps " + std::to_string(num_steps) + " exceeds train_steps " +
                              std::to_string(schedule.train_steps),
                          "schedule.num_steps");
    }
    SamplerTimeline timeline;
    timeline.num_steps = num_steps;
    timeline.step_to_train_t.reserve(static_cast<std::size_t>(num_steps));
    timeline.alpha_bar_at_step.reserve(static_cast<std::size_t>(num_steps) + 1);
    for (int s = 0; s < num_steps; ++s) {
        int t = schedule.train_steps - 1;
        if (num_steps > 1) {
            const double exact = static_cast<double>(num_steps - 1 - s) * static_cast<double>(schedule.train_steps - 1) /
                                 static_cast<double>(num_steps - 1);
            t = static_cast<int>(std::lround(exact));
        }
        timeline.step_to_train_t.push_back(t);
        timeline.alpha_bar_at_step.push_back(schedule.alpha_bar[static_cast<std::size_t>(t)]);
    }
    timeline.alpha_bar_at_step.push_back(1.0);
    return timeline;
}

void validate_ladder(const LadderConfig& config, std::optional<int> num_steps, int granularity) {
    if (config.n_stages < 1) {
        throw ConfigError("must be a positive integer, got " + std::to_string(config.n_stages), "ladder.n_stages");
    }
    if (config.t_min < 0) {
        throw ConfigError("must be non-negative, got " + std::to_string(config.t_min), "ladder.t_min");
    }
    if (config.t_min >= config.t_max) {
        throw ConfigError("t_min " + std::to_string(config.t_min) + " must be below t_max " +
                              std::to_string(config.t_max),
                          "ladder.t_min");
    }
    if (num_steps && config.t_max > *num_steps) {
        throw ConfigError("t_max " + std::to_string(config.t_max) + " exceeds num_steps " + std::to_string(*num_steps),
                          "ladder.t_max");
    }
    // Zero exponents are rejected: 0^0 is ambiguous at i = 1.
    if (!(config.m_t > 0.0) || !std::isfinite(config.m_t)) {
        throw ConfigError("must be a positive real", "ladder.m_t");
    }
    if (!(config.m_omega > 0.0) || !std::isfinite(config.m_omega)) {
        throw ConfigError("must be a positive real", "ladder.m_omega");
    }
    if (!std::isfinite(config.omega_min) || !std::isfinite(config.omega_max) ||
        config.omega_min > config.omega_max) {
        throw ConfigError("need finite omega_min <= omega_max", "ladder.omega_min");
    }
    if (config.resolutions.size() != static_cast<std::size_t>(config.n_stages)) {
        throw ConfigError("expected " + std::to_string(config.n_stages) + " resolutions, got " +
                              std::to_string(config.resolutions.size()),
                          "ladder.resolutions");
    }
    for (std::size_t i = 0; i < config.resolutions.size(); ++i) {
        const Resolution& r = config.resolutions[i];
        if (r.height <= 0 || r.width <= 0) {
            throw ConfigError("resolution " + r.to_string() + " must be positive", "ladder.resolutions");
        }
        if (r.height % granularity != 0 || r.width % granularity != 0) {
            throw ConfigError("resolution " + r.to_string() + " is not divisible by codec granularity " +
                                  std::to_string(granularity),
                              "ladder.resolutions");
        }
        if (i > 0) {
            const Resolution& prev = config.resolutions[i - 1];
            if (r.height < prev.height || r.width < prev.width) {
                throw ConfigError("resolutions must be non-decreasing, " + prev.to_string() + " then " + r.to_string(),
                                  "ladder.resolutions");
            }
        }
    }
}

LadderConfig ladder_preset(std::string_view name, Resolution base) {
    LadderConfig config;
    if (name == "paper-2048") {
        config.t_min = 40;
        config.t_max = 50;
        config.n_stages = 2;
        config.m_t = 1.0;
        config.omega_min = 5.0;
        config.omega_max = 30.0;
        config.m_omega = 1.0;
        config.resolutions = {base, {base.height * 2, base.width * 2}};
    } else if (name == "paper-4096") {
        config.t_min = 40;
        config.t_max = 50;
        config.n_stages = 3;
        config.m_t = 0.5;
        config.omega_min = 5.0;
        config.omega_max = 50.0;
        config.m_omega = 0.5;
        config.resolutions = {base, {base.height * 2, base.width * 2}, {base.height * 4, base.width * 4}};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'", "ladder.preset");
    }
    return config;
}

std::vector<std::string> ladder_preset_names() { return {"paper-2048", "paper-4096"}; }

std::vector<int> select_refresh_steps(const LadderConfig& config) {
    validate_ladder(config);
    std::vector<int> steps;
    const double span = static_cast<double>(config.t_max - config.t_min);
    for (int i = 1; i < config.n_stages; ++i) {
        const double frac = static_cast<double>(i - 1) / static_cast<double>(config.n_stages);
        const double value = span * std::pow(frac, config.m_t) + static_cast<double>(config.t_min);
        // The offset absorbs representation error in (i - 1) / N when the exact value is an integer.
        steps.push_back(static_cast<int>(std::floor(value + 1e-9)));
    }
    return steps;
}

std::vector<double> select_omegas(const LadderConfig& config) {
    validate_ladder(config);
    if (config.n_stages == 1) {
        return {config.omega_min};
    }
    std::vector<double> omegas;
    const double span = config.omega_max - config.omega_min;
    for (int i = 0; i < config.n_stages; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(config.n_stages - 1);
        omegas.push_back(span * std::pow(frac, config.m_omega) + config.omega_min);
    }
    return omegas;
}

std::vector<int> RefreshPlan::refresh_steps() const {
    std::vector<int> steps;
    for (std::size_t i = 1; i < stages.size(); ++i) {
        steps.push_back(stages[i].first_step);
    }
    return steps;
}

std::size_t RefreshPlan::stage_index_at(int step) const {
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (step >= stages[i].first_step && step < stages[i].last_step) {
            return i;
        }
    }
    throw PlanningError("step " + std::to_string(step) + " is not covered by the plan");
}

const Stage& RefreshPlan::stage_at(int step) const { return stages[stage_index_at(step)]; }

RefreshPlan build_plan(const LadderConfig& config, const SamplerTimeline& timeline) {
    validate_ladder(config, timeline.num_steps);
    const auto refresh = select_refresh_steps(config);
    const auto omegas = select_omegas(config);

    std::vector<int> bounds{0};
    for (std::size_t i = 0; i < refresh.size(); ++i) {
        const int step = refresh[i];
        if (step <= 0 || step >= timeline.num_steps) {
            throw PlanningError("refresh step " + std::to_string(step) + " of stage " + std::to_string(i + 1) +
                                " lies outside (0, " + std::to_string(timeline.num_steps) + ")");
        }
        if (step <= bounds.back()) {
            throw PlanningError("refresh step " + std::to_string(step) + " of stage " + std::to_string(i + 1) +
                                " collides with the previous boundary " + std::to_string(bounds.back()));
        }
        bounds.push_back(step);
    }
    bounds.push_back(timeline.num_steps);

    RefreshPlan plan;
    for (int i = 0; i < config.n_stages; ++i) {
        const auto k = static_cast<std::size_t>(i);
        plan.stages.push_back({config.resolutions[k], omegas[k], bounds[k], bounds[k + 1]});
    }
    return plan;
}

RefreshPlan single_stage_plan(Resolution resolution, double omega, int num_steps) {
    return RefreshPlan{{Stage{resolution, omega, 0, num_steps}}};
}

double snr_corrected_alpha_bar(double alpha_bar, double gamma) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
        throw DomainError("SNR correction needs gamma >= 1, got " + std::to_string(gamma));
    }
    if (!(alpha_bar >= 0.0 && alpha_bar <= 1.0)) {
        throw DomainError("alpha_bar must lie in [0, 1], got " + std::to_string(alpha_bar));
    }
    return alpha_bar / (gamma - (gamma - 1.0) * alpha_bar);
}

double snr_gamma(Resolution base, Resolution target) {
    const double ratio = (static_cast<double>(target.height) / base.height) *
                         (static_cast<double>(target.width) / base.width);
    return ratio * ratio;
}

}  // namespace hrlab
