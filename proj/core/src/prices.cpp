#include "aascan/prices.hpp"

#include <stdexcept>

namespace aascan {

void PriceTable::validate() const {
    for (const auto& [token, price] : prices) {
        if (price < 0)
            throw std::invalid_argument("negative price for " + token.to_hex());
        if (token == common_currency && price != 1)
            throw std::invalid_argument("common currency must be priced at exactly 1");
        if (!decimals.contains(token))
            throw std::invalid_argument("priced token missing decimals: " + token.to_hex());
    }
    if (native_token != common_currency && !prices.contains(native_token))
        throw std::invalid_argument("native token must be priced when it is not the common currency");
}

}  // namespace aascan
