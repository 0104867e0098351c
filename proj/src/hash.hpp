#ifndef MPP_HASH_HPP
#define MPP_HASH_HPP

#include <bit>
#include <cstdint>

namespace mpp {

/// Incremental 64-bit prefix hash used to place packet marks. The state
/// after feeding a bit string depends only on the string itself, so the
/// hash of every prefix can be maintained in O(1) per bit.
constexpr std::uint64_t hash_init(std::uint64_t seed) noexcept {
    return seed ^ 0x243F6A8885A308D3ULL;
}

constexpr std::uint64_t hash_update(std::uint64_t state, int bit) noexcept {
    const std::uint64_t t =
        state ^ (bit ? 0xC2B2AE3D27D4EB4FULL : 0x9E3779B97F4A7C15ULL);
    return std::rotl(t * 0xD6E8FEB86659FD93ULL, 29);
}

/// Slot index for a hash state in a packet of n slots.
constexpr std::uint32_t mark_index(std::uint64_t state, std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(state % n);
}

} // namespace mpp

#endif // MPP_HASH_HPP
