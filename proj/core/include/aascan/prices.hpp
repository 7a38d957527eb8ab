#pragma once

#include "aascan/bigint.hpp"
#include "aascan/types.hpp"

#include <map>
#include <optional>

namespace aascan {

/// Per-token prices in a common currency, per whole token.
/// The common currency itself is always priced at exactly 1, whether or not
/// it appears in the map. `native_token` is the unit transaction fees and
/// bids are paid in (defaults to the common currency).
struct PriceTable {
    Address common_currency;
    Address native_token;
    std::map<Address, Rational> prices;
    std::map<Address, uint32_t> decimals;

    std::optional<Rational> price_of(const Address& token) const {
        if (token == common_currency) return Rational(1);
        auto it = prices.find(token);
        if (it == prices.end()) return std::nullopt;
        return it->second;
    }

    std::optional<uint32_t> decimals_of(const Address& token) const {
        auto it = decimals.find(token);
        if (it == decimals.end()) return std::nullopt;
        return it->second;
    }

    // Price of one whole native token in common currency; identity when the
    // native token is the common currency.
    Rational native_price() const {
        auto p = price_of(native_token);
        return p ? *p : Rational(1);
    }

    void validate() const;  // throws std::invalid_argument
};

}  // namespace aascan
