#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qspec {

using Rng = std::mt19937_64;

/**
 * Counter-based seed derivation. A named sub-stream and an index are mixed
 * into the master seed, so the seed of task i never depends on how many
 * values other tasks consumed or on the order in which tasks run.
 */
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t index = 0) noexcept;

inline Rng make_stream(std::uint64_t master, std::string_view stream, std::uint64_t index = 0) {
    return Rng(derive_seed(master, stream, index));
}

/// Stream names shared by the estimator and the CLI.
namespace streams {
inline constexpr std::string_view kTimes = "times";
inline constexpr std::string_view kShots = "shots";
inline constexpr std::string_view kNoise = "noise";
} // namespace streams

} // namespace qspec
