#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bgm {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Hashes a base seed together with a path of tags into an independent
/// substream seed. Used for (master, feature, copy) and (master, replicate)
/// keyed streams so results do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

} // namespace bgm
