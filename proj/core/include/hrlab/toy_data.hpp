// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "hrlab/denoiser.hpp"

namespace hrlab {

/// Parameters of the synthetic "coarse shape + class detail" point set.
///
/// Point (g, k) = shape_g + detail_k, labelled k. Shapes are smooth fields: i.i.d. normals on a
/// coarse grid bilinearly enlarged to full size and scaled to unit energy. Details are random
/// fields whose every aligned 2x2 block sums to zero, scaled to energy detail_amplitude^2. A 2x
/// bilinear downscale averages exactly those blocks, so at half resolution the detail vanishes and
/// all classes of one shape coincide; a later upscale cannot restore it.
struct ToyDatasetOptions {
    int channels = 4;
    int height = 32;
    int width = 32;
    int shapes = 16;
    int classes = 4;
    int coarse = 8;
    double detail_amplitude = 1.5;
    std::uint64_t seed = 1;
};

/// shapes * classes points, ordered shape-major.
DatasetPrior make_toy_dataset(const ToyDatasetOptions& options);

}  // namespace hrlab
