// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace hrlab {

std::uint64_t mix64(std::uint64_t value) noexcept {
    value += 0x9e3779b97f4a7c15ULL;
    value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
    value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
    return value ^ (value >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

SeededRng SeededRng::stream(std::uint64_t run_seed, NoisePurpose purpose, std::uint64_t index) {
    std::uint64_t key = mix64(run_seed);
    key = mix64(key ^ static_cast<std::uint64_t>(purpose));
    key = mix64(key ^ index);
    return SeededRng(key);
}

double SeededRng::uniform() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
}

double SeededRng::normal() {
    if (spare_) {
        const double value = *spare_;
        spare_.reset();
        return value;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

}  // namespace hrlab
