#include "aascan/hex.hpp"

#include <stdexcept>

namespace aascan {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        return hex.substr(2);
    return hex;
}

}  // namespace

std::string bytes_to_hex(std::span<const uint8_t> bytes) {
    std::string out;
    out.reserve(2 + bytes.size() * 2);
    out += "0x";
    for (uint8_t b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

std::vector<uint8_t> hex_to_bytes(std::string_view hex) {
    std::string_view h = strip_0x(hex);
    if (h.size() % 2 != 0) throw std::invalid_argument("odd-length hex: " + std::string(hex));
    std::vector<uint8_t> out;
    out.reserve(h.size() / 2);
    for (size_t i = 0; i < h.size(); i += 2) {
        int hi = nibble(h[i]);
        int lo = nibble(h[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit: " + std::string(hex));
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string quantity_to_hex(const BigInt& q) {
    if (q < 0) throw std::invalid_argument("negative quantity");
    if (q == 0) return "0x0";
    BigInt v = q;
    std::string digits;
    while (v != 0) {
        digits.push_back(kHexDigits[static_cast<unsigned>(BigInt(v & 0xf))]);
        v >>= 4;
    }
    std::string out = "0x";
    out.append(digits.rbegin(), digits.rend());
    return out;
}

std::string quantity_to_hex(uint64_t q) { return quantity_to_hex(BigInt(q)); }

BigInt hex_to_quantity(std::string_view hex) {
    std::string_view h = strip_0x(hex);
    if (h.empty()) throw std::invalid_argument("empty quantity");
    BigInt v = 0;
    for (char c : h) {
        int n = nibble(c);
        if (n < 0) throw std::invalid_argument("bad hex digit: " + std::string(hex));
        v = (v << 4) | n;
    }
    return v;
}

uint64_t hex_to_u64(std::string_view hex) {
    BigInt v = hex_to_quantity(hex);
    if (v > BigInt(UINT64_MAX)) throw std::invalid_argument("quantity exceeds 64 bits: " + std::string(hex));
    return static_cast<uint64_t>(v);
}

}  // namespace aascan
