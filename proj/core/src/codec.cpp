// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/codec.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hrlab/error.hpp"
#include "hrlab/tensor_file.hpp"

namespace hrlab {

namespace {

std::string shell_quote(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += "'";
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

void Codec::require_granularity(Resolution target) const {
    const int g = spatial_granularity();
    if (target.height <= 0 || target.width <= 0 || target.height % g != 0 || target.width % g != 0) {
        throw CodecError("target " + target.to_string() + " is not a positive multiple of codec granularity " +
                         std::to_string(g));
    }
}

LatentGrid IdentityCodec::refresh_resize(const LatentGrid& latent, Resolution target, ResizeMethod method) const {
    require_granularity(target);
    return resize(latent, target, method);
}

ExternalCodec::ExternalCodec(std::string command, std::filesystem::path workdir, int granularity)
    : command_(std::move(command)), workdir_(std::move(workdir)), granularity_(granularity) {
    if (command_.empty()) {
        throw ConfigError("external codec needs a command", "codec.command");
    }
    if (granularity_ < 1) {
        throw ConfigError("must be a positive integer", "codec.granularity");
    }
    std::error_code ec;
    std::filesystem::create_directories(workdir_, ec);
    if (ec) {
        throw ConfigError("cannot create " + workdir_.string() + ": " + ec.message(), "codec.workdir");
    }
}

LatentGrid ExternalCodec::invoke(const char* mode, const LatentGrid& input) const {
    std::lock_guard lock(mutex_);
    const auto request = workdir_ / (std::string(mode) + "_request.rhrt");
    const auto response = workdir_ / (std::string(mode) + "_response.rhrt");
    const auto diagnostics = workdir_ / (std::string(mode) + "_stderr.txt");
    std::filesystem::remove(response);
    write_grid(request, input);

    const std::string line = command_ + " " + mode + " " + shell_quote(request.string()) + " " +
                             shell_quote(response.string()) + " 2> " + shell_quote(diagnostics.string());
    const int status = std::system(line.c_str());
    const int exit_code = status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
    if (exit_code != 0) {
        throw CodecError("external codec " + std::string(mode) + " exited with status " + std::to_string(exit_code) +
                         ": " + slurp(diagnostics));
    }
    try {
        return read_grid(response);
    } catch (const Error& e) {
        throw CodecError("external codec " + std::string(mode) + " returned a malformed tensor: " + e.what());
    }
}

LatentGrid ExternalCodec::decode(const LatentGrid& latent) const { return invoke("decode", latent); }

LatentGrid ExternalCodec::encode(const LatentGrid& image) const { return invoke("encode", image); }

LatentGrid ExternalCodec::refresh_resize(const LatentGrid& latent, Resolution target, ResizeMethod method) const {
    require_granularity(target);
    const LatentGrid image = decode(latent);
    if (image.height() % latent.height() != 0 || image.width() % latent.width() != 0 ||
        image.height() / latent.height() != image.width() / latent.width()) {
        throw CodecError("decoded image " + image.shape().to_string() + " is not an integer upscale of latent " +
                         latent.shape().to_string());
    }
    const int factor = image.height() / latent.height();
    const LatentGrid enlarged = resize(image, {target.height * factor, target.width * factor}, method);
    LatentGrid encoded = encode(enlarged);
    const Shape expected{latent.channels(), target.height, target.width};
    if (encoded.shape() != expected) {
        throw CodecError("encoded latent has shape " + encoded.shape().to_string() + ", expected " +
                         expected.to_string());
    }
    return encoded;
}

}  // namespace hrlab
