// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hrlab/rng.hpp"
#include "hrlab/shape.hpp"

namespace hrlab {

/// Channels x height x width grid of doubles, row-major in (channel, row, column).
///
/// Used for the noisy latent, the predicted clean latent and noise draws alike.
class LatentGrid {
public:
    LatentGrid() = default;

    /// Zero-filled grid.
    explicit LatentGrid(Shape shape);
    LatentGrid(int channels, int height, int width) : LatentGrid(Shape{channels, height, width}) {}

    /// Takes ownership of `values`. Throws ShapeError on a length mismatch and DomainError on
    /// non-finite entries.
    LatentGrid(Shape shape, std::vector<double> values);

    static LatentGrid filled(Shape shape, double value);

    const Shape& shape() const noexcept { return shape_; }
    int channels() const noexcept { return shape_.channels; }
    int height() const noexcept { return shape_.height; }
    int width() const noexcept { return shape_.width; }
    Resolution resolution() const noexcept { return shape_.resolution(); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double at(int channel, int row, int column) const { return data_[index(channel, row, column)]; }
    double& at(int channel, int row, int column) { return data_[index(channel, row, column)]; }

    /// One channel plane, height * width values.
    std::span<const double> plane(int channel) const;
    std::span<double> plane(int channel);

    friend bool operator==(const LatentGrid&, const LatentGrid&) = default;

private:
    std::size_t index(int channel, int row, int column) const {
        return (static_cast<std::size_t>(channel) * static_cast<std::size_t>(shape_.height) +
                static_cast<std::size_t>(row)) *
                   static_cast<std::size_t>(shape_.width) +
               static_cast<std::size_t>(column);
    }

    Shape shape_{};
    std::vector<double> data_;
};

/// Throws ShapeError naming `what` unless both grids share a shape.
void require_same_shape(const LatentGrid& a, const LatentGrid& b, std::string_view what);

/// a * x + b * y elementwise.
LatentGrid linear_combination(double a, const LatentGrid& x, double b, const LatentGrid& y);

/// I.i.d. standard normal grid drawn from `rng`.
LatentGrid gaussian_noise(Shape shape, SeededRng& rng);

/// sqrt(alpha_bar) * x0 + sqrt(1 - alpha_bar) * eps.
LatentGrid forward_diffuse(const LatentGrid& x0, double alpha_bar, const LatentGrid& eps);

/// Mean of squared entries.
double average_energy(const LatentGrid& latent);

/// Mean squared elementwise difference.
double mean_squared_difference(const LatentGrid& a, const LatentGrid& b);

enum class ResizeMethod { Bilinear, Nearest };

ResizeMethod parse_resize_method(std::string_view name);
std::string_view to_string(ResizeMethod method);

/// Per-channel bilinear resize with half-pixel centers: source coordinate (d + 0.5) * scale - 0.5,
/// clamped to [0, size - 1].
LatentGrid resize_bilinear(const LatentGrid& grid, int target_height, int target_width);

/// Nearest-neighbour resize, source index floor((d + 0.5) * scale). Diagnostic only.
LatentGrid resize_nearest(const LatentGrid& grid, int target_height, int target_width);

LatentGrid resize(const LatentGrid& grid, Resolution target, ResizeMethod method);

}  // namespace hrlab
