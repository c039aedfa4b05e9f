// Copyright 2026 The hrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace hrlab {

/// What a noise stream is used for. Part of the stream key, so each purpose gets an independent stream.
enum class NoisePurpose : std::uint64_t {
    Initial = 1,
    Refresh = 2,
    Fixture = 3,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t value) noexcept;

/// Deterministic generator of uniform and standard-normal variates.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard. Normals use
/// Box-Muller on 53-bit uniforms rather than std::normal_distribution, whose algorithm is
/// implementation-defined, so draws match across standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    /// Stream keyed by hash(run_seed, purpose, index). Independent of how many draws other
    /// streams of the same run have made.
    static SeededRng stream(std::uint64_t run_seed, NoisePurpose purpose, std::uint64_t index);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform in (0, 1].
    double uniform();
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace hrlab
