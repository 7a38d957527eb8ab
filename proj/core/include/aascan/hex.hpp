#pragma once

#include "aascan/bigint.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aascan {

// RPC wire conventions: byte strings render as even-length 0x hex ("0x" when
// empty); quantities render minimally with no leading zeros ("0x0" for zero).

std::string bytes_to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> hex_to_bytes(std::string_view hex);  // throws std::invalid_argument

std::string quantity_to_hex(const BigInt& q);  // q >= 0
std::string quantity_to_hex(uint64_t q);
BigInt hex_to_quantity(std::string_view hex);
uint64_t hex_to_u64(std::string_view hex);

}  // namespace aascan
