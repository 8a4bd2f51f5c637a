#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace shaprob {

// Seeded draws built only on mt19937_64's specified output sequence, so a
// seed means the same thing under every standard library.

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// In-place Fisher-Yates.
void shuffle(std::span<std::size_t> values, std::mt19937_64& rng);

/// 0..n-1 shuffled with a fresh generator seeded by `seed`.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace shaprob
