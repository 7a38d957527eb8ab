#include "aascan/classify.hpp"

#include "aascan/abi.hpp"
#include "aascan/keccak.hpp"

#include <json.hpp>

#include <fstream>

namespace aascan {
namespace {

constexpr std::string_view kBidPaidSig = "BidPaid(address,uint256)";

Rational wei_to_common(const BigInt& wei, const PriceTable& prices) {
    const uint32_t native_decimals = prices.decimals_of(prices.native_token).value_or(18);
    return Rational(wei, pow10(native_decimals)) * prices.native_price();
}

}  // namespace

std::string unpriced_token_policy_to_string(UnpricedTokenPolicy p) {
    switch (p) {
        case UnpricedTokenPolicy::Conservative: return "conservative";
        case UnpricedTokenPolicy::Reject: return "reject";
    }
    throw std::invalid_argument("unknown policy value");
}

UnpricedTokenPolicy unpriced_token_policy_from_string(std::string_view s) {
    if (s == "conservative") return UnpricedTokenPolicy::Conservative;
    if (s == "reject") return UnpricedTokenPolicy::Reject;
    throw std::invalid_argument("unknown unpriced-token policy: " + std::string(s));
}

std::string searcher_identity_to_string(SearcherIdentity s) {
    switch (s) {
        case SearcherIdentity::TxFrom: return "tx_from";
        case SearcherIdentity::TxTo: return "tx_to";
    }
    throw std::invalid_argument("unknown searcher identity value");
}

SearcherIdentity searcher_identity_from_string(std::string_view s) {
    if (s == "tx_from" || s == "from") return SearcherIdentity::TxFrom;
    if (s == "tx_to" || s == "to") return SearcherIdentity::TxTo;
    throw std::invalid_argument("unknown searcher identity: " + std::string(s));
}

void ClassifierConfig::validate() const {
    price_table.validate();
    for (const auto& [token, dust] : dust_threshold) {
        if (dust < 0) {
            throw std::invalid_argument("negative dust threshold for " + token.to_hex());
        }
    }
}

ClassifierConfig ClassifierConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open classifier config: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    ClassifierConfig cfg;
    if (j.contains("native_token")) {
        cfg.price_table.native_token = Address::from_hex(j.at("native_token").get<std::string>());
    }
    cfg.price_table.common_currency =
        j.contains("common_currency")
            ? Address::from_hex(j.at("common_currency").get<std::string>())
            : cfg.price_table.native_token;
    const nlohmann::json prices = j.value("prices", nlohmann::json::object());
    for (const auto& [token, price] : prices.items()) {
        cfg.price_table.prices[Address::from_hex(token)] =
            rational_from_string(price.get<std::string>());
    }
    const nlohmann::json decimals = j.value("decimals", nlohmann::json::object());
    for (const auto& [token, dec] : decimals.items()) {
        cfg.price_table.decimals[Address::from_hex(token)] = dec.get<uint32_t>();
    }
    const nlohmann::json dust_thresholds = j.value("dust_threshold", nlohmann::json::object());
    for (const auto& [token, dust] : dust_thresholds.items()) {
        cfg.dust_threshold[Address::from_hex(token)] = bigint_from_string(dust.get<std::string>());
    }
    for (const auto& addr : j.value("fastlane_addresses", nlohmann::json::array())) {
        cfg.fastlane_addresses.insert(Address::from_hex(addr.get<std::string>()));
    }
    if (j.contains("unpriced_token_policy")) {
        cfg.unpriced_token_policy =
            unpriced_token_policy_from_string(j.at("unpriced_token_policy").get<std::string>());
    }
    if (j.contains("searcher_identity")) {
        cfg.searcher_identity =
            searcher_identity_from_string(j.at("searcher_identity").get<std::string>());
    }
    cfg.validate();
    return cfg;
}

void ClassifierConfig::save_file(const std::string& path) const {
    nlohmann::json prices = nlohmann::json::object();
    for (const auto& [token, price] : price_table.prices) {
        prices[token.to_hex()] = rational_to_string(price);
    }
    nlohmann::json decimals = nlohmann::json::object();
    for (const auto& [token, dec] : price_table.decimals) {
        decimals[token.to_hex()] = dec;
    }
    nlohmann::json dust = nlohmann::json::object();
    for (const auto& [token, d] : dust_threshold) {
        dust[token.to_hex()] = d.str();
    }
    nlohmann::json fastlane = nlohmann::json::array();
    for (const auto& addr : fastlane_addresses) fastlane.push_back(addr.to_hex());

    nlohmann::json j{
        {"common_currency", price_table.common_currency.to_hex()},
        {"native_token", price_table.native_token.to_hex()},
        {"prices", std::move(prices)},
        {"decimals", std::move(decimals)},
        {"dust_threshold", std::move(dust)},
        {"fastlane_addresses", std::move(fastlane)},
        {"unpriced_token_policy", unpriced_token_policy_to_string(unpriced_token_policy)},
        {"searcher_identity", searcher_identity_to_string(searcher_identity)},
    };

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write classifier config: " + path);
    out << j.dump(2) << '\n';
}

DeltaVector swap_delta(const SwapEvent& s) {
    DeltaVector d;
    d.add(s.token_out, s.amount_out.raw);
    d.add(s.token_in, -s.amount_in.raw);
    return d;
}

DeltaVector net_delta(const std::vector<SwapEvent>& swaps) {
    DeltaVector d;
    for (const SwapEvent& s : swaps) d += swap_delta(s);
    return d;
}

Rational compute_fee(const RawTransaction& tx, const PriceTable& prices) {
    return wei_to_common(BigInt(tx.gas_used) * tx.effective_gas_price, prices);
}

const Hash32& bid_paid_topic() {
    static const Hash32 topic = keccak256(kBidPaidSig);
    return topic;
}

Rational compute_bid(const RawTransaction& tx, const ClassifierConfig& cfg) {
    BigInt wei = 0;
    if (tx.to && cfg.fastlane_addresses.contains(*tx.to)) {
        wei += tx.value.raw;
    }
    for (const RawLog& log : tx.logs) {
        if (!cfg.fastlane_addresses.contains(log.emitter)) continue;
        if (log.topics.size() != 2 || log.topics[0] != bid_paid_topic()) continue;
        if (log.data.size() != abi::kWord) continue;
        wei += abi::read_uint(log.data, 0);
    }
    return wei_to_common(wei, cfg.price_table);
}

bool is_fastlane(const RawTransaction& tx, const ClassifierConfig& cfg) {
    if (tx.to && cfg.fastlane_addresses.contains(*tx.to)) return true;
    for (const RawLog& log : tx.logs) {
        if (cfg.fastlane_addresses.contains(log.emitter)) return true;
    }
    return false;
}

Rational priced_value(const DeltaVector& d, const PriceTable& prices,
                      UnpricedTokenPolicy policy) {
    Rational total = 0;
    for (const auto& [token, delta] : d.entries()) {
        const auto price = prices.price_of(token);
        if (!price) {
            if (policy == UnpricedTokenPolicy::Reject) throw UnpriceableError(token);
            continue;
        }
        const uint32_t dec = prices.decimals_of(token).value_or(0);
        total += Rational(delta, pow10(dec)) * *price;
    }
    return total;
}

Classification evaluate(const RawTransaction& tx, const RawBlock& block,
                        const std::vector<SwapEvent>& swaps, const ClassifierConfig& cfg) {
    Classification c;
    c.tx_hash = tx.hash;
    c.block_number = block.number;
    c.tx_index = tx.index;
    c.timestamp = block.timestamp;
    c.swap_count = static_cast<uint32_t>(swaps.size());
    c.delta = net_delta(swaps);
    c.tau = compute_fee(tx, cfg.price_table);
    c.beta = compute_bid(tx, cfg);
    c.searcher = (cfg.searcher_identity == SearcherIdentity::TxTo && tx.to) ? *tx.to : tx.from;

    try {
        c.gross_value = priced_value(c.delta, cfg.price_table, cfg.unpriced_token_policy);
    } catch (const UnpriceableError& e) {
        c.gross_value = 0;
        c.profit = 0;
        c.is_aa = false;
        c.strategy = Strategy::NotAA;
        c.diagnostic = e.what();
        return c;
    }
    c.profit = c.gross_value - c.tau - c.beta;

    bool no_loss = true;
    for (const auto& [token, delta] : c.delta.entries()) {
        if (delta < -cfg.dust_for(token)) {
            no_loss = false;
            break;
        }
    }

    c.is_aa = c.swap_count >= 2 && no_loss && c.profit > 0;
    c.strategy = !c.is_aa ? Strategy::NotAA
                 : is_fastlane(tx, cfg) ? Strategy::FastLaneBased
                                        : Strategy::SpamBased;
    return c;
}

}  // namespace aascan
