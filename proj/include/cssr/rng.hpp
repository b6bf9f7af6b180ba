#pragma once

// Deterministic random primitives. Encoder and decoder regenerate bit-identical
// sensing matrices from a transmitted 64-bit seed, so the generator is frozen
// here: SplitMix64 for the uniform stream, Box-Muller for the Gaussian
// conversion. Changing either requires a container version bump.

#include <cmath>
#include <cstdint>

namespace cssr {

// SplitMix64 output finalizer (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform draw in the open interval (0, 1).
    double next_unit() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Standard normal deviates, consumed in generation order (Box-Muller pairs:
// the cosine branch first, then the sine branch).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) noexcept : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = kTwoPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double kTwoPi = 6.28318530717958647692;

    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Seed for the sensing matrix of one block. Stage constants keep the frame and
// block folds from commuting, so decode order never matters.
constexpr std::uint64_t block_matrix_seed(std::uint64_t stream_seed,
                                          std::uint32_t frame_index,
                                          std::uint32_t block_index) noexcept {
    std::uint64_t h = mix64(stream_seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (frame_index + 0xD1B54A32D192ED03ULL));
    h = mix64(h ^ (block_index + 0x8CB92BA72F3D8DD7ULL));
    return h;
}

}  // namespace cssr
