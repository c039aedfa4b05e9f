// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hrlab/latent.hpp"

namespace hrlab {

/// RHRT tensor file layout, all little-endian:
///
///   offset 0   "RHRT"
///   offset 4   u32 version (= 1)
///   offset 8   u32 ndim
///   offset 12  ndim x u32 dims
///   then       prod(dims) x float32, row-major
struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;

    std::size_t element_count() const;
};

inline constexpr std::uint32_t kTensorFileVersion = 1;

std::vector<std::uint8_t> encode_tensor(const Tensor& tensor);

/// Throws ParseError naming the byte offset of the first malformed field.
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor(const std::filesystem::path& path);

/// Grid <-> 3-d tensor. Values are narrowed to float32 on the way out.
Tensor grid_to_tensor(const LatentGrid& grid);
LatentGrid tensor_to_grid(const Tensor& tensor);

void write_grid(const std::filesystem::path& path, const LatentGrid& grid);
LatentGrid read_grid(const std::filesystem::path& path);

}  // namespace hrlab
