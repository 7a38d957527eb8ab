#pragma once

#include "aascan/bigint.hpp"
#include "aascan/keccak.hpp"
#include "aascan/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace aascan::abi {

inline constexpr size_t kWord = 32;

// Readers index 32-byte words inside event data / return data. Out-of-range
// access throws std::out_of_range.
BigInt read_uint(std::span<const uint8_t> data, size_t word_index);
BigInt read_int(std::span<const uint8_t> data, size_t word_index);  // two's complement int256
Address read_address(std::span<const uint8_t> data, size_t word_index);

Address address_from_word(const Hash32& word);          // low 20 bytes
Hash32 word_from_address(const Address& a);             // left-padded
std::array<uint8_t, kWord> word_from_uint(const BigInt& v);  // 0 <= v < 2^256
std::array<uint8_t, kWord> word_from_int(const BigInt& v);   // -2^255 <= v < 2^255

void append_word(std::vector<uint8_t>& out, const std::array<uint8_t, kWord>& word);

// First four bytes of keccak256 of the canonical signature string.
std::array<uint8_t, 4> selector(std::string_view signature);

}  // namespace aascan::abi
