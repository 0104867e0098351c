#ifndef MPP_CODEC_HPP
#define MPP_CODEC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hash.hpp"

namespace mpp {

/// Bit string, one bit per element, most significant bit first.
using Bits = std::vector<std::uint8_t>;

/// Parameters governing all encode/decode arithmetic. A message of
/// `message_bits` is extended with `checksum_bits` literal zeros, and each
/// of the k+c bit prefixes of the result places one mark in a packet of
/// `packet_slots` slots.
struct CodecParams {
    std::uint32_t message_bits = 64;
    std::uint32_t checksum_bits = 13;
    std::uint32_t packet_slots = 256;
    std::uint64_t hash_seed = 0;

    std::uint32_t codeword_bits() const noexcept { return message_bits + checksum_bits; }
    void validate() const; // throws std::invalid_argument
};

/// Fixed-length vector of slot marks; 1 = pulse present.
struct Packet {
    std::vector<std::uint8_t> marks;

    Packet() = default;
    explicit Packet(std::uint32_t slots) : marks(slots, 0) {}

    std::uint32_t slots() const noexcept { return static_cast<std::uint32_t>(marks.size()); }
    std::uint32_t popcount() const noexcept;
    double density() const noexcept;

    Packet operator|(const Packet& other) const;
    bool operator==(const Packet& other) const = default;

    /// Lowercase hex, ceil(n/4) digits, slot 0 as the most significant bit.
    std::string to_hex() const;
    static Packet from_hex(std::string_view hex, std::uint32_t slots);
};

struct DecodeReport {
    std::vector<Bits> messages;       // strictly ascending, no duplicates
    std::uint64_t node_expansions = 0;
    bool truncated = false;           // some of the search space was skipped
};

inline constexpr std::uint32_t kDefaultDecodeLimit = 1024;

Bits append_checksum(const Bits& message, const CodecParams& params);

Packet encode(const Bits& message, const CodecParams& params);

/// Depth-first search over codeword prefixes, bit 0 before bit 1; checksum
/// depths only extend with 0. Stops once `limit` messages have been found;
/// a nonzero `node_budget` additionally bounds the number of prefix
/// extensions attempted. Either early stop sets the truncated flag.
DecodeReport decode_all(const Packet& packet, const CodecParams& params,
                        std::uint32_t limit = kDefaultDecodeLimit,
                        std::uint64_t node_budget = 0);

/// First (lexicographically smallest) valid message, if any.
std::optional<Bits> decode_first(const Packet& packet, const CodecParams& params);

/// Monte Carlo mean number of decodable messages in packets whose marks
/// are set independently with the given probability.
double hallucination_rate(double density, const CodecParams& params,
                          std::uint32_t trials, std::uint64_t rng_seed);

// Bit-string serialization helpers.
std::string bits_to_hex(const Bits& bits);
Bits hex_to_bits(std::string_view hex, std::uint32_t bit_count);
std::string bits_to_ascii(const Bits& bits); // requires size % 8 == 0
Bits ascii_to_bits(std::string_view text);

} // namespace mpp

#endif // MPP_CODEC_HPP
