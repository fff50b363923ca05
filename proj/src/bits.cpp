#include "qmp/bits.hpp"

#include <stdexcept>

namespace qmp {

BitString BitString::from01(std::string_view s) {
    BitString v(static_cast<int>(s.size()));
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bitstring must be 0/1");
        v.bits[i] = static_cast<uint8_t>(s[i] - '0');
    }
    return v;
}

bool BitString::is_zero() const {
    for (uint8_t b : bits)
        if (b) return false;
    return true;
}

BitString& BitString::operator^=(const BitString& o) {
    if (bits.size() != o.bits.size()) throw std::invalid_argument("bitstring length mismatch");
    for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= o.bits[i];
    return *this;
}

std::string BitString::to01() const {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) s.push_back(static_cast<char>('0' + b));
    return s;
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    const size_t nbytes = (bits.size() + 7) / 8;
    std::string s;
    s.reserve(nbytes * 2);
    for (size_t i = 0; i < nbytes; ++i) {
        uint8_t byte = 0;
        for (size_t j = 0; j < 8 && i * 8 + j < bits.size(); ++j)
            byte = static_cast<uint8_t>(byte | (bits[i * 8 + j] << j));
        s.push_back(digits[byte >> 4]);
        s.push_back(digits[byte & 0xf]);
    }
    return s;
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : data) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a64(data);
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

}  // namespace qmp
