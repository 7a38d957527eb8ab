#include "aascan/classification.hpp"

#include <json.hpp>

#include <stdexcept>

namespace aascan {

using nlohmann::json;

std::string strategy_to_string(Strategy s) {
    switch (s) {
        case Strategy::NotAA: return "NotAA";
        case Strategy::SpamBased: return "SpamBased";
        case Strategy::FastLaneBased: return "FastLaneBased";
    }
    throw std::logic_error("bad strategy value");
}

Strategy strategy_from_string(std::string_view s) {
    if (s == "NotAA") return Strategy::NotAA;
    if (s == "SpamBased") return Strategy::SpamBased;
    if (s == "FastLaneBased") return Strategy::FastLaneBased;
    throw std::invalid_argument("unknown strategy: " + std::string(s));
}

std::string classification_to_json_line(const Classification& c) {
    json delta = json::object();
    for (const auto& [token, amount] : c.delta.entries())
        delta[token.to_hex()] = amount.str();
    json j{
        {"tx_hash", c.tx_hash.to_hex()},
        {"block_number", c.block_number},
        {"tx_index", c.tx_index},
        {"timestamp", c.timestamp},
        {"is_aa", c.is_aa},
        {"strategy", strategy_to_string(c.strategy)},
        {"swap_count", c.swap_count},
        {"delta", std::move(delta)},
        {"gross_value", rational_to_string(c.gross_value)},
        {"tau", rational_to_string(c.tau)},
        {"beta", rational_to_string(c.beta)},
        {"profit", rational_to_string(c.profit)},
        {"searcher", c.searcher.to_hex()},
    };
    if (c.diagnostic) j["diagnostic"] = *c.diagnostic;
    return j.dump();
}

Classification classification_from_json_line(std::string_view line) {
    json j = json::parse(line);
    Classification c;
    c.tx_hash = Hash32::from_hex(j.at("tx_hash").get<std::string>());
    c.block_number = j.at("block_number").get<uint64_t>();
    c.tx_index = j.at("tx_index").get<uint32_t>();
    c.timestamp = j.at("timestamp").get<int64_t>();
    c.is_aa = j.at("is_aa").get<bool>();
    c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    c.swap_count = j.at("swap_count").get<uint32_t>();
    for (const auto& [token, amount] : j.at("delta").items())
        c.delta.add(Address::from_hex(token), bigint_from_string(amount.get<std::string>()));
    c.gross_value = rational_from_string(j.at("gross_value").get<std::string>());
    c.tau = rational_from_string(j.at("tau").get<std::string>());
    c.beta = rational_from_string(j.at("beta").get<std::string>());
    c.profit = rational_from_string(j.at("profit").get<std::string>());
    c.searcher = Address::from_hex(j.at("searcher").get<std::string>());
    if (j.contains("diagnostic")) c.diagnostic = j.at("diagnostic").get<std::string>();
    return c;
}

}  // namespace aascan
