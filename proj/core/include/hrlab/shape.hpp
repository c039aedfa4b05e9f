// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace hrlab {

/// Spatial size of a latent, in latent pixels.
struct Resolution {
    int height = 0;
    int width = 0;

    friend bool operator==(const Resolution&, const Resolution&) = default;
    friend auto operator<=>(const Resolution&, const Resolution&) = default;

    std::string to_string() const { return std::to_string(height) + "x" + std::to_string(width); }
};

struct Shape {
    int channels = 0;
    int height = 0;
    int width = 0;

    friend bool operator==(const Shape&, const Shape&) = default;

    Resolution resolution() const { return {height, width}; }
    std::size_t size() const {
        return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::string to_string() const {
        return std::to_string(channels) + "x" + std::to_string(height) + "x" + std::to_string(width);
    }
};

}  // namespace hrlab
