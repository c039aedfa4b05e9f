// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/latent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrlab/error.hpp"

namespace hrlab {

namespace {

void require_positive(Shape shape) {
    if (shape.channels <= 0 || shape.height <= 0 || shape.width <= 0) {
        throw ShapeError("grid dimensions must be positive, got " + shape.to_string());
    }
}

void require_alpha_bar(double alpha_bar, std::string_view what) {
    if (!(alpha_bar >= 0.0 && alpha_bar <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(alpha_bar));
    }
}

struct AxisTap {
    int lo;
    int hi;
    double frac;
};

std::vector<AxisTap> bilinear_taps(int source, int target) {
    std::vector<AxisTap> taps(static_cast<std::size_t>(target));
    const double scale = static_cast<double>(source) / static_cast<double>(target);
    for (int d = 0; d < target; ++d) {
        double coord = (static_cast<double>(d) + 0.5) * scale - 0.5;
        coord = std::clamp(coord, 0.0, static_cast<double>(source - 1));
        const int lo = static_cast<int>(std::floor(coord));
        const int hi = std::min(lo + 1, source - 1);
        taps[static_cast<std::size_t>(d)] = {lo, hi, coord - lo};
    }
    return taps;
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

std::vector<int> nearest_taps(int source, int target) {
    std::vector<int> taps(static_cast<std::size_t>(target));
    const double scale = static_cast<double>(source) / static_cast<double>(target);
    for (int d = 0; d < target; ++d) {
        const int index = static_cast<int>(std::floor((static_cast<double>(d) + 0.5) * scale));
        taps[static_cast<std::size_t>(d)] = std::min(index, source - 1);
    }
    return taps;
}

}  // namespace

LatentGrid::LatentGrid(Shape shape) : shape_(shape) {
    require_positive(shape);
    data_.assign(shape.size(), 0.0);
}

LatentGrid::LatentGrid(Shape shape, std::vector<double> values) : shape_(shape), data_(std::move(values)) {
    require_positive(shape);
    if (data_.size() != shape.size()) {
        throw ShapeError("grid " + shape.to_string() + " needs " + std::to_string(shape.size()) + " values, got " +
                         std::to_string(data_.size()));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw DomainError("grid values must be finite");
        }
    }
}

LatentGrid LatentGrid::filled(Shape shape, double value) {
    LatentGrid grid(shape);
    std::fill(grid.data_.begin(), grid.data_.end(), value);
    return grid;
}

std::span<const double> LatentGrid::plane(int channel) const {
    const std::size_t n = static_cast<std::size_t>(shape_.height) * static_cast<std::size_t>(shape_.width);
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(channel) * n, n);
}

std::span<double> LatentGrid::plane(int channel) {
    const std::size_t n = static_cast<std::size_t>(shape_.height) * static_cast<std::size_t>(shape_.width);
    return std::span<double>(data_).subspan(static_cast<std::size_t>(channel) * n, n);
}

void require_same_shape(const LatentGrid& a, const LatentGrid& b, std::string_view what) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(what) + ": shape mismatch " + a.shape().to_string() + " vs " +
                         b.shape().to_string());
    }
}

LatentGrid linear_combination(double a, const LatentGrid& x, double b, const LatentGrid& y) {
    require_same_shape(x, y, "linear_combination");
    LatentGrid out(x.shape());
    auto dst = out.data();
    auto xs = x.data();
    auto ys = y.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = a * xs[i] + b * ys[i];
    }
    return out;
}

LatentGrid gaussian_noise(Shape shape, SeededRng& rng) {
    LatentGrid out(shape);
    for (double& v : out.data()) {
        v = rng.normal();
    }
    return out;
}

LatentGrid forward_diffuse(const LatentGrid& x0, double alpha_bar, const LatentGrid& eps) {
    require_alpha_bar(alpha_bar, "forward_diffuse alpha_bar");
    require_same_shape(x0, eps, "forward_diffuse");
    return linear_combination(std::sqrt(alpha_bar), x0, std::sqrt(1.0 - alpha_bar), eps);
}

double average_energy(const LatentGrid& latent) {
    if (latent.size() == 0) {
        throw ShapeError("average_energy of an empty grid");
    }
    double sum = 0.0;
    for (double v : latent.data()) {
        sum += v * v;
    }
    return sum / static_cast<double>(latent.size());
}

double mean_squared_difference(const LatentGrid& a, const LatentGrid& b) {
    require_same_shape(a, b, "mean_squared_difference");
    double sum = 0.0;
    auto as = a.data();
    auto bs = b.data();
    for (std::size_t i = 0; i < as.size(); ++i) {
        const double d = as[i] - bs[i];
        sum += d * d;
    }
    return sum / static_cast<double>(as.size());
}

ResizeMethod parse_resize_method(std::string_view name) {
    if (name == "bilinear") return ResizeMethod::Bilinear;
    if (name == "nearest") return ResizeMethod::Nearest;
    throw ConfigError("unknown resize method '" + std::string(name) + "' (expected bilinear or nearest)");
}

std::string_view to_string(ResizeMethod method) {
    return method == ResizeMethod::Bilinear ? "bilinear" : "nearest";
}

LatentGrid resize_bilinear(const LatentGrid& grid, int target_height, int target_width) {
    const Shape out_shape{grid.channels(), target_height, target_width};
    LatentGrid out(out_shape);
    const auto rows = bilinear_taps(grid.height(), target_height);
    const auto cols = bilinear_taps(grid.width(), target_width);
    for (int c = 0; c < grid.channels(); ++c) {
        for (int y = 0; y < target_height; ++y) {
            const AxisTap& r = rows[static_cast<std::size_t>(y)];
            for (int x = 0; x < target_width; ++x) {
                const AxisTap& k = cols[static_cast<std::size_t>(x)];
                // a + f * (b - a) keeps constant inputs exactly constant.
                const double top = lerp(grid.at(c, r.lo, k.lo), grid.at(c, r.lo, k.hi), k.frac);
                const double bottom = lerp(grid.at(c, r.hi, k.lo), grid.at(c, r.hi, k.hi), k.frac);
                out.at(c, y, x) = lerp(top, bottom, r.frac);
            }
        }
    }
    return out;
}

LatentGrid resize_nearest(const LatentGrid& grid, int target_height, int target_width) {
    LatentGrid out(Shape{grid.channels(), target_height, target_width});
    const auto rows = nearest_taps(grid.height(), target_height);
    const auto cols = nearest_taps(grid.width(), target_width);
    for (int c = 0; c < grid.channels(); ++c) {
        for (int y = 0; y < target_height; ++y) {
            for (int x = 0; x < target_width; ++x) {
                out.at(c, y, x) = grid.at(c, rows[static_cast<std::size_t>(y)], cols[static_cast<std::size_t>(x)]);
            }
        }
    }
    return out;
}

LatentGrid resize(const LatentGrid& grid, Resolution target, ResizeMethod method) {
    return method == ResizeMethod::Bilinear ? resize_bilinear(grid, target.height, target.width)
                                            : resize_nearest(grid, target.height, target.width);
}

}  // namespace hrlab
