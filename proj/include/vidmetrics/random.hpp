#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vidmetrics {

inline constexpr uint64_t kDefaultSeed = 20200101;

/// splitmix64 finalizer.
uint64_t mix64(uint64_t x) noexcept;

/// Stable across platforms and runs (FNV-1a over the bytes, then mixed with the seed).
uint64_t derive_seed(uint64_t master, std::string_view key) noexcept;

/// Uniform integer in [0, bound) from raw engine output. Unlike
/// std::uniform_int_distribution the result is identical on every standard library.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

}  // namespace vidmetrics
