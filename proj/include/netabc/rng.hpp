#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace netabc {

using Rng = std::mt19937_64;

// 64-bit FNV-1a, used for substream tags and artifact digests.
constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

constexpr std::uint64_t stream_tag(std::string_view name) { return fnv1a(name); }

/// Engine for the substream identified by `ids` under `master_seed`.
/// Distinct id tuples give statistically independent streams.
inline Rng make_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> ids = {})
{
    std::seed_seq::result_type words[2 + 2 * 8] = {};
    std::size_t len = 0;
    words[len++] = static_cast<std::uint32_t>(master_seed);
    words[len++] = static_cast<std::uint32_t>(master_seed >> 32);
    for (auto id : ids) {
        if (len + 2 > std::size(words))
            break;
        words[len++] = static_cast<std::uint32_t>(id);
        words[len++] = static_cast<std::uint32_t>(id >> 32);
    }
    std::seed_seq seq(words, words + len);
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

} // namespace netabc
