#pragma once

#include "aascan/bigint.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aascan {

/// 20-byte account/contract identifier, rendered as 0x-prefixed lowercase hex.
struct Address {
    std::array<uint8_t, 20> bytes{};

    static Address from_hex(std::string_view hex);
    std::string to_hex() const;
    bool is_zero() const;

    auto operator<=>(const Address&) const = default;
};

/// 32-byte word: transaction hashes, log topics.
struct Hash32 {
    std::array<uint8_t, 32> bytes{};

    static Hash32 from_hex(std::string_view hex);
    std::string to_hex() const;

    auto operator<=>(const Hash32&) const = default;
};

/// Exact token quantity in smallest units. `decimals` only affects rendering;
/// arithmetic stays on `raw`.
struct TokenAmount {
    BigInt raw;
    uint32_t decimals = 0;

    bool operator==(const TokenAmount&) const = default;
};

/// Exact decimal string, e.g. raw=3121000000000000000 dec=18 -> "3.121".
/// Requires decimals <= 36. parse_amount(render_amount(t), t.decimals) == t.
std::string render_amount(const TokenAmount& t);
TokenAmount parse_amount(std::string_view text, uint32_t decimals);

struct RawLog {
    Address emitter;
    std::vector<Hash32> topics;  // 0..4 words
    std::vector<uint8_t> data;
    uint32_t log_index = 0;

    bool operator==(const RawLog&) const = default;
};

enum class TxStatus : uint8_t { Failure = 0, Success = 1 };

struct RawTransaction {
    Hash32 hash;
    uint32_t index = 0;  // position in block
    Address from;
    std::optional<Address> to;            // absent for contract creation
    TokenAmount value{BigInt(0), 18};     // native currency, wei
    uint64_t gas_used = 0;
    BigInt effective_gas_price;           // wei
    TxStatus status = TxStatus::Success;
    std::vector<RawLog> logs;             // ordered by log_index ascending

    bool operator==(const RawTransaction&) const = default;
};

struct RawBlock {
    uint64_t number = 0;
    int64_t timestamp = 0;  // unix seconds
    Address coinbase;       // block producer / fee recipient
    std::vector<RawTransaction> transactions;  // ordered by index

    bool operator==(const RawBlock&) const = default;
};

}  // namespace aascan
