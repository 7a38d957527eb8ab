#include "aascan/abi.hpp"

#include <algorithm>
#include <stdexcept>

namespace aascan::abi {

namespace {

std::span<const uint8_t> word_at(std::span<const uint8_t> data, size_t word_index) {
    size_t begin = word_index * kWord;
    if (begin + kWord > data.size())
        throw std::out_of_range("abi word " + std::to_string(word_index) + " out of range");
    return data.subspan(begin, kWord);
}

BigInt uint_from_bytes(std::span<const uint8_t> word) {
    BigInt v = 0;
    for (uint8_t b : word) v = (v << 8) | b;
    return v;
}

const BigInt& two_pow_256() {
    static const BigInt v = BigInt(1) << 256;
    return v;
}

}  // namespace

BigInt read_uint(std::span<const uint8_t> data, size_t word_index) {
    return uint_from_bytes(word_at(data, word_index));
}

BigInt read_int(std::span<const uint8_t> data, size_t word_index) {
    auto word = word_at(data, word_index);
    BigInt v = uint_from_bytes(word);
    if (word[0] & 0x80) v -= two_pow_256();
    return v;
}

Address read_address(std::span<const uint8_t> data, size_t word_index) {
    auto word = word_at(data, word_index);
    Address a;
    std::copy(word.begin() + 12, word.end(), a.bytes.begin());
    return a;
}

Address address_from_word(const Hash32& word) {
    Address a;
    std::copy(word.bytes.begin() + 12, word.bytes.end(), a.bytes.begin());
    return a;
}

Hash32 word_from_address(const Address& a) {
    Hash32 w;
    std::copy(a.bytes.begin(), a.bytes.end(), w.bytes.begin() + 12);
    return w;
}

std::array<uint8_t, kWord> word_from_uint(const BigInt& v) {
    if (v < 0 || v >= two_pow_256()) throw std::invalid_argument("uint256 out of range");
    std::array<uint8_t, kWord> out{};
    BigInt x = v;
    for (int i = kWord - 1; i >= 0 && x != 0; --i) {
        out[static_cast<size_t>(i)] = static_cast<uint8_t>(BigInt(x & 0xff));
        x >>= 8;
    }
    return out;
}

std::array<uint8_t, kWord> word_from_int(const BigInt& v) {
    static const BigInt lo = -(BigInt(1) << 255), hi = BigInt(1) << 255;
    if (v < lo || v >= hi) throw std::invalid_argument("int256 out of range");
    return word_from_uint(v < 0 ? v + two_pow_256() : v);
}

void append_word(std::vector<uint8_t>& out, const std::array<uint8_t, kWord>& word) {
    out.insert(out.end(), word.begin(), word.end());
}

std::array<uint8_t, 4> selector(std::string_view signature) {
    Hash32 h = keccak256(signature);
    return {h.bytes[0], h.bytes[1], h.bytes[2], h.bytes[3]};
}

}  // namespace aascan::abi
