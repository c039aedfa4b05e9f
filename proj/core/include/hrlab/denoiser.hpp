// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/latent.hpp"

namespace hrlab {

/// Guidance condition: unconditional (empty) or a class label.
class Condition {
public:
    static Condition unconditional() { return Condition(); }
    static Condition of_class(int label) { return Condition(label); }

    bool is_unconditional() const noexcept { return !label_.has_value(); }
    std::optional<int> label() const noexcept { return label_; }
    std::string to_string() const { return label_ ? "class(" + std::to_string(*label_) + ")" : "unconditional"; }

    friend bool operator==(const Condition&, const Condition&) = default;

private:
    Condition() = default;
    explicit Condition(int label) : label_(label) {}

    std::optional<int> label_;
};

/// Where in the sampling trajectory a prediction is requested.
struct StepContext {
    int step = 0;
    int train_t = 0;
    double alpha_bar = 0.0;
};

/// Noise-prediction model. Implementations are immutable after construction; predict_eps is
/// callable concurrently once prepare() has run for the shape in use.
class Denoiser {
public:
    virtual ~Denoiser() = default;

    /// Called at stage entry with the latent shape of that stage.
    virtual void prepare(const Shape& /*shape*/) const {}

    virtual LatentGrid predict_eps(const LatentGrid& x_t, const StepContext& context,
                                   const Condition& condition) const = 0;
};

/// eps_uncond + omega * (eps_cond - eps_uncond).
LatentGrid cfg_combine(const LatentGrid& eps_uncond, const LatentGrid& eps_cond, double omega);

/// Inverts forward diffusion for the noise: (x_t - sqrt(alpha_bar) * x0) / sqrt(1 - alpha_bar).
LatentGrid eps_from_x0(const LatentGrid& x_t, const LatentGrid& x0, double alpha_bar);

/// Isotropic Gaussian data distribution N(mean, variance * I). The posterior mean is affine in x_t,
/// which makes whole trajectories computable in closed form. Ignores the condition.
class GaussianPrior final : public Denoiser {
public:
    GaussianPrior(LatentGrid mean, double variance);

    const LatentGrid& mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }

    /// mu + sqrt(ab) * var / (ab * var + 1 - ab) * (x_t - sqrt(ab) * mu). When x_t's spatial size
    /// differs from the mean's, each channel's average mean value is broadcast.
    LatentGrid posterior_mean(const LatentGrid& x_t, double alpha_bar) const;

    LatentGrid predict_eps(const LatentGrid& x_t, const StepContext& context,
                           const Condition& condition) const override;

private:
    LatentGrid mean_;
    double variance_;
    std::vector<double> channel_means_;
};

/// Bayes-optimal denoiser for the empirical distribution over a finite labelled point set.
///
/// The unconditional branch uses every point; a class condition restricts to points with that
/// label. Queries at a resolution other than the points' own use the points bilinearly resized
/// to it; those copies are cached per resolution by prepare().
class DatasetPrior final : public Denoiser {
public:
    DatasetPrior(std::vector<LatentGrid> points, std::vector<int> labels);
    /// Moves the points and labels; the resize cache starts empty.
    DatasetPrior(DatasetPrior&& other) noexcept
        : points_(std::move(other.points_)), labels_(std::move(other.labels_)) {}

    const std::vector<LatentGrid>& points() const noexcept { return points_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    Shape point_shape() const { return points_.front().shape(); }
    bool has_label(int label) const;

    void prepare(const Shape& shape) const override;

    LatentGrid predict_eps(const LatentGrid& x_t, const StepContext& context,
                           const Condition& condition) const override;

private:
    using PointSet = std::vector<LatentGrid>;

    std::shared_ptr<const PointSet> points_at(const Shape& shape) const;

    std::vector<LatentGrid> points_;
    std::vector<int> labels_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<int, int>, std::shared_ptr<const PointSet>> cache_;

    friend LatentGrid dataset_posterior_mean(const DatasetPrior&, const LatentGrid&, double, const Condition&);
};

/// sum_i w_i p_i with w_i proportional to exp(-|x_t - sqrt(ab) p_i|^2 / (2 (1 - ab))) over the points
/// selected by `condition`. Throws DomainError unless 0 < ab < 1 and DenoiserError when the condition
/// selects no points.
LatentGrid dataset_posterior_mean(const DatasetPrior& prior, const LatentGrid& x_t, double alpha_bar,
                                  const Condition& condition);

/// Predicts a clean sample of zero everywhere; diagnostic.
class ZeroDenoiser final : public Denoiser {
public:
    LatentGrid predict_eps(const LatentGrid& x_t, const StepContext& context,
                           const Condition& condition) const override;
};

}  // namespace hrlab
