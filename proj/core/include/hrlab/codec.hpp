// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <mutex>
#include <string>

#include "hrlab/latent.hpp"

namespace hrlab {

/// Decode -> resize -> encode pathway used to enlarge a predicted clean latent.
class Codec {
public:
    virtual ~Codec() = default;

    /// Latent pixels per resolution unit; every target resolution must be a multiple of it.
    virtual int spatial_granularity() const = 0;

    /// E(resize(D(latent))). Output shape is (channels, target.height, target.width).
    virtual LatentGrid refresh_resize(const LatentGrid& latent, Resolution target, ResizeMethod method) const = 0;

protected:
    void require_granularity(Resolution target) const;
};

/// Decode and encode are the identity, so refresh_resize is a plain latent-space resize.
class IdentityCodec final : public Codec {
public:
    int spatial_granularity() const override { return 1; }
    LatentGrid refresh_resize(const LatentGrid& latent, Resolution target, ResizeMethod method) const override;
};

/// Runs an external program for decode and encode:
///
///   <command> decode <input.rhrt> <output.rhrt>
///   <command> encode <input.rhrt> <output.rhrt>
///
/// Files live under `workdir`. A non-zero exit status, or a response whose shape breaks the contract,
/// raises CodecError carrying the program's stderr. Invocations on one instance are serialized.
class ExternalCodec final : public Codec {
public:
    ExternalCodec(std::string command, std::filesystem::path workdir, int granularity);

    int spatial_granularity() const override { return granularity_; }

    LatentGrid decode(const LatentGrid& latent) const;
    LatentGrid encode(const LatentGrid& image) const;

    /// The image is resized to target * (image size / latent size) before encoding.
    LatentGrid refresh_resize(const LatentGrid& latent, Resolution target, ResizeMethod method) const override;

private:
    LatentGrid invoke(const char* mode, const LatentGrid& input) const;

    std::string command_;
    std::filesystem::path workdir_;
    int granularity_;
    mutable std::mutex mutex_;
};

}  // namespace hrlab
