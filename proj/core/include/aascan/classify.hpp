#pragma once

#include "aascan/classification.hpp"
#include "aascan/decode.hpp"
#include "aascan/delta.hpp"
#include "aascan/prices.hpp"
#include "aascan/types.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace aascan {

enum class UnpricedTokenPolicy { Conservative, Reject };
enum class SearcherIdentity { TxFrom, TxTo };

std::string unpriced_token_policy_to_string(UnpricedTokenPolicy p);
UnpricedTokenPolicy unpriced_token_policy_from_string(std::string_view s);
std::string searcher_identity_to_string(SearcherIdentity s);
SearcherIdentity searcher_identity_from_string(std::string_view s);

struct ClassifierConfig {
    PriceTable price_table;
    // Per-token tolerance on the no-loss condition, in raw token units.
    // Zero (the default for unlisted tokens) demands strictly non-negative
    // net deltas.
    std::map<Address, BigInt> dust_threshold;
    std::set<Address> fastlane_addresses;
    UnpricedTokenPolicy unpriced_token_policy = UnpricedTokenPolicy::Conservative;
    SearcherIdentity searcher_identity = SearcherIdentity::TxFrom;

    BigInt dust_for(const Address& token) const {
        auto it = dust_threshold.find(token);
        return it == dust_threshold.end() ? BigInt(0) : it->second;
    }

    void validate() const;  // throws std::invalid_argument

    static ClassifierConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

class UnpriceableError : public std::runtime_error {
public:
    explicit UnpriceableError(const Address& token)
        : std::runtime_error("no price for token " + token.to_hex() +
                             " with nonzero net delta"),
          token_(token) {}
    const Address& token() const { return token_; }

private:
    Address token_;
};

/// Per-leg balance change from the transaction agent's side:
/// +amount_out of token_out, -amount_in of token_in.
DeltaVector swap_delta(const SwapEvent& s);

/// Sum of swap_delta over all legs; zero-net tokens are dropped.
DeltaVector net_delta(const std::vector<SwapEvent>& swaps);

/// Transaction fee in common currency: gas_used * effective_gas_price wei,
/// scaled to whole native tokens and priced through the table.
Rational compute_fee(const RawTransaction& tx, const PriceTable& prices);

// topic0 of the auction bid event "BidPaid(address,uint256)"
// (indexed searcher, bid amount in wei).
const Hash32& bid_paid_topic();

/// Priority bid in common currency: native value sent by the top-level call
/// to a configured auction address, plus bid amounts from logs those
/// addresses emitted. Internal-call value transfers are not observable here,
/// so this undercounts bids paid through nested calls.
Rational compute_bid(const RawTransaction& tx, const ClassifierConfig& cfg);

/// True iff the transaction touches a configured auction address, either as
/// the top-level callee or as the emitter of any log.
bool is_fastlane(const RawTransaction& tx, const ClassifierConfig& cfg);

/// Net deltas valued in common currency per whole token. Unpriced tokens
/// contribute zero under Conservative; a nonzero-delta unpriced token throws
/// UnpriceableError under Reject.
Rational priced_value(const DeltaVector& d, const PriceTable& prices,
                      UnpricedTokenPolicy policy);

/// Full arbitrage verdict for one transaction:
///   is_aa  =  swaps >= 2
///          and every token's net delta >= -dust_threshold(token)
///          and priced_value - fee - bid > 0.
/// Positive verdicts split into FastLaneBased and SpamBased by auction
/// involvement. Under the Reject policy, an unpriceable transaction is
/// classified NotAA with a diagnostic instead of propagating the error.
Classification evaluate(const RawTransaction& tx, const RawBlock& block,
                        const std::vector<SwapEvent>& swaps, const ClassifierConfig& cfg);

}  // namespace aascan
