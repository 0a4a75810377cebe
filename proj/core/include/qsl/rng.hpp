#pragma once

#include <cstdint>

#include "qsl/linalg.hpp"

namespace qsl {

/// Deterministic PRNG with named substreams.
///
/// The generator is xoshiro256++ (Blackman/Vigna), state-initialized from
/// SplitMix64, so sequences are identical on every platform.  Substream k of
/// master seed s starts SplitMix64 at s + k * 0x9E3779B97F4A7C15 (the
/// SplitMix64 golden-ratio increment), which places the streams at distant
/// points of the SplitMix64 orbit.  Gaussians come from the Box-Muller
/// transform on 53-bit uniforms; a generated pair is consumed in order, so
/// the draw sequence is part of the reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent deterministic substream of a master seed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    /// Standard normal deviate.
    double gaussian();

    /// Standard complex Gaussian (x + iy)/sqrt(2) with x, y standard normal;
    /// the real part is drawn first.
    Complex standard_complex_gaussian();

private:
    std::uint64_t s_[4];
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}
