#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmp {

// Fixed-length bitstring; the XOR-group element used for payloads, masks and
// replica values.
struct BitString {
    std::vector<uint8_t> bits;  // one entry per bit, each 0 or 1

    BitString() = default;
    explicit BitString(int len) : bits(static_cast<size_t>(len), 0) {}

    static BitString from01(std::string_view s);
    static BitString single(int b) {
        BitString v(1);
        v.bits[0] = static_cast<uint8_t>(b & 1);
        return v;
    }

    int size() const { return static_cast<int>(bits.size()); }
    int bit(int i) const { return bits[static_cast<size_t>(i)]; }
    void set(int i, int v) { bits[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 1); }
    bool is_zero() const;

    BitString& operator^=(const BitString& o);
    friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }
    bool operator==(const BitString&) const = default;
    auto operator<=>(const BitString&) const = default;

    std::string to01() const;
    // Packed little-endian-within-byte hex: bit i lands in byte i/8, position i%8.
    std::string to_hex() const;
};

uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

}  // namespace qmp
