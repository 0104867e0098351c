#include "codec.hpp"

#include <algorithm>
#include <stdexcept>

#include "rng.hpp"

namespace mpp {

void CodecParams::validate() const {
    if (message_bits < 1) throw std::invalid_argument("message_bits must be >= 1");
    if (packet_slots < 2) throw std::invalid_argument("packet_slots must be >= 2");
    if (message_bits + checksum_bits > packet_slots) {
        throw std::invalid_argument("message_bits + checksum_bits must not exceed packet_slots");
    }
}

std::uint32_t Packet::popcount() const noexcept {
    std::uint32_t c = 0;
    for (std::uint8_t m : marks) c += m;
    return c;
}

double Packet::density() const noexcept {
    return marks.empty() ? 0.0 : static_cast<double>(popcount()) / static_cast<double>(marks.size());
}

Packet Packet::operator|(const Packet& other) const {
    if (marks.size() != other.marks.size()) {
        throw std::invalid_argument("packet slot counts differ");
    }
    Packet out(slots());
    for (std::size_t i = 0; i < marks.size(); ++i) {
        out.marks[i] = static_cast<std::uint8_t>(marks[i] | other.marks[i]);
    }
    return out;
}

std::string Packet::to_hex() const {
    const std::size_t digits = (marks.size() + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        unsigned nib = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t idx = d * 4 + b;
            nib <<= 1;
            if (idx < marks.size() && marks[idx]) nib |= 1u;
        }
        out[d] = "0123456789abcdef"[nib];
    }
    return out;
}

namespace {

unsigned hex_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw std::invalid_argument("invalid hex digit");
}

} // namespace

Packet Packet::from_hex(std::string_view hex, std::uint32_t slots) {
    if (slots < 1) throw std::invalid_argument("slot count must be >= 1");
    const std::size_t digits = (slots + 3) / 4;
    if (hex.size() != digits) {
        throw std::invalid_argument("packet hex must have ceil(n/4) digits");
    }
    Packet out(slots);
    for (std::size_t d = 0; d < digits; ++d) {
        const unsigned nib = hex_digit(hex[d]);
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t idx = d * 4 + b;
            const bool bit = (nib >> (3 - b)) & 1u;
            if (idx < slots) {
                out.marks[idx] = static_cast<std::uint8_t>(bit);
            } else if (bit) {
                throw std::invalid_argument("padding bits past the last slot must be zero");
            }
        }
    }
    return out;
}

Bits append_checksum(const Bits& message, const CodecParams& params) {
    params.validate();
    if (message.size() != params.message_bits) {
        throw std::invalid_argument("message length must equal message_bits");
    }
    Bits cw = message;
    cw.insert(cw.end(), params.checksum_bits, 0);
    return cw;
}

Packet encode(const Bits& message, const CodecParams& params) {
    const Bits cw = append_checksum(message, params);
    Packet p(params.packet_slots);
    std::uint64_t state = hash_init(params.hash_seed);
    for (std::uint8_t bit : cw) {
        state = hash_update(state, bit);
        p.marks[mark_index(state, params.packet_slots)] = 1;
    }
    return p;
}

namespace {

struct DecodeSearch {
    const Packet& packet;
    const CodecParams& prm;
    std::uint32_t limit;
    std::uint64_t node_budget;
    DecodeReport report;
    Bits path;
    bool stop = false;

    void run() {
        path.reserve(prm.codeword_bits());
        descend(hash_init(prm.hash_seed), 0);
    }

    void descend(std::uint64_t state, std::uint32_t depth) {
        if (depth == prm.codeword_bits()) {
            report.messages.emplace_back(path.begin(), path.begin() + prm.message_bits);
            return;
        }
        const int last_bit = depth < prm.message_bits ? 1 : 0; // checksum forces 0
        for (int bit = 0; bit <= last_bit; ++bit) {
            if (report.messages.size() >= limit ||
                (node_budget && report.node_expansions >= node_budget)) {
                report.truncated = true;
                stop = true;
                return;
            }
            ++report.node_expansions;
            const std::uint64_t next = hash_update(state, bit);
            if (packet.marks[mark_index(next, prm.packet_slots)]) {
                path.push_back(static_cast<std::uint8_t>(bit));
                descend(next, depth + 1);
                path.pop_back();
                if (stop) return;
            }
        }
    }
};

} // namespace

DecodeReport decode_all(const Packet& packet, const CodecParams& params,
                        std::uint32_t limit, std::uint64_t node_budget) {
    params.validate();
    if (packet.slots() != params.packet_slots) {
        throw std::invalid_argument("packet length must equal packet_slots");
    }
    if (limit < 1) throw std::invalid_argument("limit must be >= 1");
    DecodeSearch search{packet, params, limit, node_budget, {}, {}, false};
    search.run();
    return std::move(search.report);
}

std::optional<Bits> decode_first(const Packet& packet, const CodecParams& params) {
    DecodeReport rep = decode_all(packet, params, 1);
    if (rep.messages.empty()) return std::nullopt;
    return std::move(rep.messages.front());
}

double hallucination_rate(double density, const CodecParams& params,
                          std::uint32_t trials, std::uint64_t rng_seed) {
    params.validate();
    if (!(density >= 0.0 && density <= 1.0)) {
        throw std::invalid_argument("density must lie in [0, 1]");
    }
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    // Limit large enough that no packet can truncate the count for k <= 20;
    // beyond that full enumeration is unreachable anyway.
    const std::uint32_t limit =
        params.message_bits < 21 ? (1u << params.message_bits) : (1u << 20);

    double total = 0.0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        Rng rng(derive_subseed(rng_seed, t));
        Packet p(params.packet_slots);
        for (auto& m : p.marks) m = static_cast<std::uint8_t>(rng.uniform() < density);
        total += static_cast<double>(decode_all(p, params, limit).messages.size());
    }
    return total / static_cast<double>(trials);
}

std::string bits_to_hex(const Bits& bits) {
    const std::size_t digits = (bits.size() + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        unsigned nib = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t idx = d * 4 + b;
            nib <<= 1;
            if (idx < bits.size() && bits[idx]) nib |= 1u;
        }
        out[d] = "0123456789abcdef"[nib];
    }
    return out;
}

Bits hex_to_bits(std::string_view hex, std::uint32_t bit_count) {
    const std::size_t digits = (bit_count + 3) / 4;
    if (hex.size() != digits) {
        throw std::invalid_argument("hex string must have ceil(bits/4) digits");
    }
    Bits out(bit_count, 0);
    for (std::size_t d = 0; d < digits; ++d) {
        const unsigned nib = hex_digit(hex[d]);
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t idx = d * 4 + b;
            const bool bit = (nib >> (3 - b)) & 1u;
            if (idx < bit_count) {
                out[idx] = static_cast<std::uint8_t>(bit);
            } else if (bit) {
                throw std::invalid_argument("padding bits past the last bit must be zero");
            }
        }
    }
    return out;
}

std::string bits_to_ascii(const Bits& bits) {
    if (bits.size() % 8 != 0) {
        throw std::invalid_argument("bit count must be a multiple of 8 for ASCII");
    }
    std::string out(bits.size() / 8, '\0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned c = 0;
        for (std::size_t b = 0; b < 8; ++b) c = (c << 1) | bits[i * 8 + b];
        out[i] = static_cast<char>(c);
    }
    return out;
}

Bits ascii_to_bits(std::string_view text) {
    Bits out(text.size() * 8, 0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned c = static_cast<unsigned char>(text[i]);
        for (std::size_t b = 0; b < 8; ++b) {
            out[i * 8 + b] = static_cast<std::uint8_t>((c >> (7 - b)) & 1u);
        }
    }
    return out;
}

} // namespace mpp
