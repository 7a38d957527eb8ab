#pragma once

#include "aascan/types.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace aascan {

// Keccak-256 as used for EVM event topics and call selectors (original
// Keccak 0x01 padding, not the SHA3-2015 variant).
Hash32 keccak256(std::span<const uint8_t> data);
Hash32 keccak256(std::string_view text);

}  // namespace aascan
