// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrlab/error.hpp"

namespace hrlab {

namespace {

void require_open_alpha_bar(double alpha_bar) {
    if (!(alpha_bar > 0.0 && alpha_bar < 1.0)) {
        throw DomainError("denoiser needs alpha_bar in (0, 1), got " + std::to_string(alpha_bar));
    }
}

}  // namespace

LatentGrid cfg_combine(const LatentGrid& eps_uncond, const LatentGrid& eps_cond, double omega) {
    require_same_shape(eps_uncond, eps_cond, "cfg_combine");
    LatentGrid out(eps_uncond.shape());
    auto dst = out.data();
    auto u = eps_uncond.data();
    auto c = eps_cond.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = u[i] + omega * (c[i] - u[i]);
    }
    return out;
}

LatentGrid eps_from_x0(const LatentGrid& x_t, const LatentGrid& x0, double alpha_bar) {
    require_open_alpha_bar(alpha_bar);
    require_same_shape(x_t, x0, "eps_from_x0");
    const double root = std::sqrt(alpha_bar);
    const double sigma = std::sqrt(1.0 - alpha_bar);
    LatentGrid out(x_t.shape());
    auto dst = out.data();
    auto x = x_t.data();
    auto c = x0.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = (x[i] - root * c[i]) / sigma;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// GaussianPrior

GaussianPrior::GaussianPrior(LatentGrid mean, double variance) : mean_(std::move(mean)), variance_(variance) {
    if (!(variance_ > 0.0) || !std::isfinite(variance_)) {
        throw ConfigError("Gaussian prior variance must be positive", "denoiser.variance");
    }
    for (int c = 0; c < mean_.channels(); ++c) {
        double sum = 0.0;
        for (double v : mean_.plane(c)) {
            sum += v;
        }
        channel_means_.push_back(sum / static_cast<double>(mean_.plane(c).size()));
    }
}

LatentGrid GaussianPrior::posterior_mean(const LatentGrid& x_t, double alpha_bar) const {
    require_open_alpha_bar(alpha_bar);
    if (x_t.channels() != mean_.channels()) {
        throw DenoiserError("Gaussian prior has " + std::to_string(mean_.channels()) + " channels, input has " +
                            std::to_string(x_t.channels()));
    }
    const double root = std::sqrt(alpha_bar);
    const double gain = root * variance_ / (alpha_bar * variance_ + 1.0 - alpha_bar);
    LatentGrid out(x_t.shape());
    const bool same = x_t.shape() == mean_.shape();
    for (int c = 0; c < x_t.channels(); ++c) {
        auto src = x_t.plane(c);
        auto dst = out.plane(c);
        auto mu = mean_.plane(c);
        const double mu_c = channel_means_[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const double m = same ? mu[i] : mu_c;
            dst[i] = m + gain * (src[i] - root * m);
        }
    }
    return out;
}

LatentGrid GaussianPrior::predict_eps(const LatentGrid& x_t, const StepContext& context,
                                      const Condition& /*condition*/) const {
    return eps_from_x0(x_t, posterior_mean(x_t, context.alpha_bar), context.alpha_bar);
}

// ---------------------------------------------------------------------------------------------
// DatasetPrior

DatasetPrior::DatasetPrior(std::vector<LatentGrid> points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.empty()) {
        throw ConfigError("dataset needs at least one point", "denoiser.path");
    }
    if (labels_.size() != points_.size()) {
        throw ConfigError("expected " + std::to_string(points_.size()) + " labels, got " +
                              std::to_string(labels_.size()),
                          "denoiser.labels");
    }
    for (const auto& p : points_) {
        if (p.shape() != points_.front().shape()) {
            throw ConfigError("dataset points must share one shape", "denoiser.path");
        }
    }
    for (int label : labels_) {
        if (label < 0) {
            throw ConfigError("labels must be non-negative", "denoiser.labels");
        }
    }
    cache_[{point_shape().height, point_shape().width}] = std::make_shared<const PointSet>(points_);
}

bool DatasetPrior::has_label(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

void DatasetPrior::prepare(const Shape& shape) const { points_at(shape); }

std::shared_ptr<const DatasetPrior::PointSet> DatasetPrior::points_at(const Shape& shape) const {
    if (shape.channels != point_shape().channels) {
        throw DenoiserError("dataset points have " + std::to_string(point_shape().channels) +
                            " channels, input has " + std::to_string(shape.channels));
    }
    std::lock_guard lock(cache_mutex_);
    auto& slot = cache_[{shape.height, shape.width}];
    if (!slot) {
        PointSet resized;
        resized.reserve(points_.size());
        for (const auto& p : points_) {
            resized.push_back(resize_bilinear(p, shape.height, shape.width));
        }
        slot = std::make_shared<const PointSet>(std::move(resized));
    }
    return slot;
}

LatentGrid dataset_posterior_mean(const DatasetPrior& prior, const LatentGrid& x_t, double alpha_bar,
                                  const Condition& condition) {
    require_open_alpha_bar(alpha_bar);
    if (auto label = condition.label(); label && !prior.has_label(*label)) {
        throw DenoiserError("unknown class label " + std::to_string(*label));
    }
    const auto points = prior.points_at(x_t.shape());
    const double root = std::sqrt(alpha_bar);
    const double denom = 2.0 * (1.0 - alpha_bar);

    std::vector<std::size_t> selected;
    std::vector<double> log_weights;
    for (std::size_t i = 0; i < points->size(); ++i) {
        if (auto label = condition.label(); label && prior.labels()[i] != *label) {
            continue;
        }
        const auto p = (*points)[i].data();
        const auto x = x_t.data();
        double dist = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - root * p[k];
            dist += d * d;
        }
        selected.push_back(i);
        log_weights.push_back(-dist / denom);
    }
    if (selected.empty()) {
        throw DenoiserError("condition " + condition.to_string() + " selects no dataset points");
    }

    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0;
    for (double& w : log_weights) {
        w = std::exp(w - top);
        total += w;
    }

    LatentGrid mean(x_t.shape());
    auto dst = mean.data();
    for (std::size_t j = 0; j < selected.size(); ++j) {
        const double w = log_weights[j] / total;
        if (w == 0.0) {
            continue;
        }
        const auto p = (*points)[selected[j]].data();
        for (std::size_t k = 0; k < dst.size(); ++k) {
            dst[k] += w * p[k];
        }
    }
    return mean;
}

LatentGrid DatasetPrior::predict_eps(const LatentGrid& x_t, const StepContext& context,
                                     const Condition& condition) const {
    return eps_from_x0(x_t, dataset_posterior_mean(*this, x_t, context.alpha_bar, condition), context.alpha_bar);
}

// ---------------------------------------------------------------------------------------------

LatentGrid ZeroDenoiser::predict_eps(const LatentGrid& x_t, const StepContext& context,
                                     const Condition& /*condition*/) const {
    return eps_from_x0(x_t, LatentGrid(x_t.shape()), context.alpha_bar);
}

}  // namespace hrlab
