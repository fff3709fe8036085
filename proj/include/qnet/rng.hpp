#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qnet {

/// Seeded generator with a portable bounded-draw: std::uniform_int_distribution
/// is implementation-defined, so experiment outputs would differ across
/// standard libraries. Rejection sampling on the raw mt19937 stream keeps
/// sampled instances identical everywhere.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t limit = (std::uint64_t{1} << 32) / span * span;
        std::uint64_t draw;
        do {
            draw = gen_();
        } while (draw >= limit);
        return static_cast<int>(static_cast<std::int64_t>(lo) + static_cast<std::int64_t>(draw % span));
    }

private:
    std::mt19937 gen_;
};

} // namespace qnet
