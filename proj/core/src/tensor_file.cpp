// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/tensor_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hrlab/error.hpp"

namespace hrlab {

namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'H', 'R', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return offset_; }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t value = 0;
        for (int i = 0; i < 4; ++i) {
            value |= static_cast<std::uint32_t>(bytes_[offset_ + static_cast<std::size_t>(i)]) << (8 * i);
        }
        offset_ += 4;
        return value;
    }

    void need(std::size_t count, const char* what) const {
        if (bytes_.size() - offset_ < count) {
            throw ParseError("RHRT: truncated " + std::string(what) + " at byte offset " + std::to_string(offset_));
        }
    }

    std::span<const std::uint8_t> take(std::size_t count, const char* what) {
        need(count, what);
        auto view = bytes_.subspan(offset_, count);
        offset_ += count;
        return view;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t offset_ = 0;
};

}  // namespace

std::size_t Tensor::element_count() const {
    std::size_t count = 1;
    for (auto d : dims) {
        count *= d;
    }
    return count;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& tensor) {
    if (tensor.values.size() != tensor.element_count()) {
        throw ShapeError("RHRT: payload has " + std::to_string(tensor.values.size()) + " values, dims need " +
                         std::to_string(tensor.element_count()));
    }
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.reserve(12 + 4 * tensor.dims.size() + 4 * tensor.values.size());
    put_u32(out, kTensorFileVersion);
    put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
    for (auto d : tensor.dims) {
        put_u32(out, d);
    }
    for (float v : tensor.values) {
        if (!std::isfinite(v)) {
            throw DomainError("RHRT: payload values must be finite");
        }
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
    Reader reader(bytes);
    auto magic = reader.take(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0) {
        throw ParseError("RHRT: bad magic at byte offset 0");
    }
    const std::size_t version_offset = reader.offset();
    const auto version = reader.u32("version");
    if (version != kTensorFileVersion) {
        throw ParseError("RHRT: unsupported version " + std::to_string(version) + " at byte offset " +
                         std::to_string(version_offset));
    }
    Tensor tensor;
    const std::size_t ndim_offset = reader.offset();
    const auto ndim = reader.u32("ndim");
    if (ndim == 0 || ndim > 8) {
        throw ParseError("RHRT: ndim " + std::to_string(ndim) + " out of range at byte offset " +
                         std::to_string(ndim_offset));
    }
    std::size_t count = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        const std::size_t dim_offset = reader.offset();
        const auto d = reader.u32("dims");
        if (d == 0) {
            throw ParseError("RHRT: zero dimension at byte offset " + std::to_string(dim_offset));
        }
        tensor.dims.push_back(d);
        count *= d;
    }
    const std::size_t payload_offset = reader.offset();
    if ((bytes.size() - payload_offset) / 4 < count) {
        throw ParseError("RHRT: payload truncated at byte offset " + std::to_string(payload_offset) + ", need " +
                         std::to_string(count) + " floats");
    }
    tensor.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t value_offset = reader.offset();
        const float v = std::bit_cast<float>(reader.u32("payload"));
        if (!std::isfinite(v)) {
            throw ParseError("RHRT: non-finite value at byte offset " + std::to_string(value_offset));
        }
        tensor.values.push_back(v);
    }
    if (reader.offset() != bytes.size()) {
        throw ParseError("RHRT: trailing bytes at byte offset " + std::to_string(reader.offset()));
    }
    return tensor;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    const auto bytes = encode_tensor(tensor);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_tensor(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Tensor grid_to_tensor(const LatentGrid& grid) {
    Tensor tensor;
    tensor.dims = {static_cast<std::uint32_t>(grid.channels()), static_cast<std::uint32_t>(grid.height()),
                   static_cast<std::uint32_t>(grid.width())};
    tensor.values.reserve(grid.size());
    for (double v : grid.data()) {
        tensor.values.push_back(static_cast<float>(v));
    }
    return tensor;
}

LatentGrid tensor_to_grid(const Tensor& tensor) {
    if (tensor.dims.size() != 3) {
        throw ParseError("RHRT: expected ndim = 3 for a grid, got " + std::to_string(tensor.dims.size()) +
                         " (byte offset 8)");
    }
    const Shape shape{static_cast<int>(tensor.dims[0]), static_cast<int>(tensor.dims[1]),
                      static_cast<int>(tensor.dims[2])};
    return LatentGrid(shape, std::vector<double>(tensor.values.begin(), tensor.values.end()));
}

void write_grid(const std::filesystem::path& path, const LatentGrid& grid) { write_tensor(path, grid_to_tensor(grid)); }

LatentGrid read_grid(const std::filesystem::path& path) {
    const auto tensor = read_tensor(path);
    try {
        return tensor_to_grid(tensor);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace hrlab
