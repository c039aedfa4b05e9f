// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/toy_data.hpp"

#include <cmath>

#include "hrlab/error.hpp"

namespace hrlab {

namespace {

void scale_to_energy(LatentGrid& grid, double energy) {
    const double factor = std::sqrt(energy / average_energy(grid));
    for (double& v : grid.data()) {
        v *= factor;
    }
}

}  // namespace

DatasetPrior make_toy_dataset(const ToyDatasetOptions& options) {
    if (options.channels < 1 || options.height < 2 || options.width < 2 || options.height % 2 != 0 ||
        options.width % 2 != 0) {
        throw ConfigError("toy dataset needs positive channels and even height and width", "denoiser.height");
    }
    if (options.shapes < 1 || options.classes < 1 || options.coarse < 1) {
        throw ConfigError("shapes, classes and coarse must be positive", "denoiser.shapes");
    }
    if (!(options.detail_amplitude >= 0.0)) {
        throw ConfigError("must be non-negative", "denoiser.detail_amplitude");
    }

    auto rng = SeededRng::stream(options.seed, NoisePurpose::Fixture, 0);
    const Shape full{options.channels, options.height, options.width};

    std::vector<LatentGrid> shapes;
    for (int g = 0; g < options.shapes; ++g) {
        const LatentGrid coarse = gaussian_noise({options.channels, options.coarse, options.coarse}, rng);
        LatentGrid shape = resize_bilinear(coarse, options.height, options.width);
        scale_to_energy(shape, 1.0);
        shapes.push_back(std::move(shape));
    }

    std::vector<LatentGrid> details;
    for (int k = 0; k < options.classes; ++k) {
        LatentGrid detail(full);
        for (int c = 0; c < options.channels; ++c) {
            for (int y = 0; y < options.height; y += 2) {
                for (int x = 0; x < options.width; x += 2) {
                    double block[4];
                    double mean = 0.0;
                    for (double& v : block) {
                        v = rng.normal();
                        mean += v / 4.0;
                    }
                    detail.at(c, y, x) = block[0] - mean;
                    detail.at(c, y, x + 1) = block[1] - mean;
                    detail.at(c, y + 1, x) = block[2] - mean;
                    detail.at(c, y + 1, x + 1) = block[3] - mean;
                }
            }
        }
        if (options.detail_amplitude > 0.0) {
            scale_to_energy(detail, options.detail_amplitude * options.detail_amplitude);
        } else {
            detail = LatentGrid(full);
        }
        details.push_back(std::move(detail));
    }

    std::vector<LatentGrid> points;
    std::vector<int> labels;
    for (int g = 0; g < options.shapes; ++g) {
        for (int k = 0; k < options.classes; ++k) {
            points.push_back(linear_combination(1.0, shapes[static_cast<std::size_t>(g)], 1.0,
                                                details[static_cast<std::size_t>(k)]));
            labels.push_back(k);
        }
    }
    return DatasetPrior(std::move(points), std::move(labels));
}

}  // namespace hrlab
