#include "aascan/decode.hpp"

#include "aascan/abi.hpp"
#include "aascan/keccak.hpp"

#include <json.hpp>

#include <fstream>
#include <mutex>

namespace aascan {
namespace {

constexpr std::string_view kUniV2SwapSig =
    "Swap(address,uint256,uint256,uint256,uint256,address)";
constexpr std::string_view kUniV3SwapSig =
    "Swap(address,address,int256,int256,uint160,uint128,int24)";
constexpr std::string_view kAlgebraSwapSig =
    "Swap(address,address,int256,int256,uint160,uint128,int24,uint24)";
constexpr std::string_view kBalancerV2SwapSig =
    "Swap(bytes32,address,address,uint256,uint256)";

[[noreturn]] void malformed(const std::string& what) {
    throw SwapDecodeError(SwapDecodeError::Kind::Malformed, what);
}

[[noreturn]] void ambiguous(const std::string& what) {
    throw SwapDecodeError(SwapDecodeError::Kind::AmbiguousSwap, what);
}

void require_protocol(const PoolMeta& meta, Protocol expected) {
    if (meta.protocol != expected) {
        throw SwapDecodeError(
            SwapDecodeError::Kind::ProtocolMismatch,
            "pool " + meta.pool.to_hex() + " registered as " +
                protocol_to_string(meta.protocol) + ", log is " +
                protocol_to_string(expected));
    }
}

void require_shape(const RawLog& log, size_t topics, size_t data_words) {
    if (log.topics.size() != topics) {
        malformed("expected " + std::to_string(topics) + " topics, got " +
                  std::to_string(log.topics.size()));
    }
    if (log.data.size() != data_words * abi::kWord) {
        malformed("expected " + std::to_string(data_words * abi::kWord) +
                  " data bytes, got " + std::to_string(log.data.size()));
    }
}

Address address_from_topic(const Hash32& topic) {
    return abi::address_from_word(topic);
}

// Shared decode for the signed-amount pair pools (UniV3 and Algebra forks):
// amount0/amount1 are the pool's view, positive into the pool.
SwapEvent decode_signed_pair(const RawLog& log, const PoolMeta& meta,
                             const Hash32& tx_hash, Protocol protocol,
                             size_t data_words) {
    require_protocol(meta, protocol);
    meta.validate();
    require_shape(log, 3, data_words);

    const BigInt amount0 = abi::read_int(log.data, 0);
    const BigInt amount1 = abi::read_int(log.data, 1);
    if (amount0 == 0 && amount1 == 0) malformed("both amounts zero");
    if (amount0 > 0 && amount1 > 0) malformed("both amounts flow into the pool");
    if (amount0 < 0 && amount1 < 0) malformed("both amounts flow out of the pool");

    // The non-negative slot is the input side; ties were excluded above.
    const bool token0_in = amount0 > 0 || (amount0 == 0 && amount1 < 0);
    SwapEvent ev;
    ev.pool = log.emitter;
    ev.protocol = protocol;
    ev.tx_hash = tx_hash;
    ev.log_index = log.log_index;
    ev.recipient = address_from_topic(log.topics[2]);
    if (token0_in) {
        ev.token_in = meta.token0();
        ev.token_out = meta.token1();
        ev.amount_in = TokenAmount{amount0, meta.decimals[0]};
        ev.amount_out = TokenAmount{-amount1, meta.decimals[1]};
    } else {
        ev.token_in = meta.token1();
        ev.token_out = meta.token0();
        ev.amount_in = TokenAmount{amount1, meta.decimals[1]};
        ev.amount_out = TokenAmount{-amount0, meta.decimals[0]};
    }
    return ev;
}

}  // namespace

std::string protocol_to_string(Protocol p) {
    switch (p) {
        case Protocol::UniV2: return "UniV2";
        case Protocol::UniV3: return "UniV3";
        case Protocol::Algebra: return "Algebra";
        case Protocol::BalancerV2: return "BalancerV2";
    }
    throw std::invalid_argument("unknown protocol value");
}

Protocol protocol_from_string(std::string_view s) {
    if (s == "UniV2") return Protocol::UniV2;
    if (s == "UniV3") return Protocol::UniV3;
    if (s == "Algebra") return Protocol::Algebra;
    if (s == "BalancerV2") return Protocol::BalancerV2;
    throw std::invalid_argument("unknown protocol name: " + std::string(s));
}

void PoolMeta::validate() const {
    if (pool.is_zero()) throw std::invalid_argument("pool address is zero");
    if (tokens.size() < 2) throw std::invalid_argument("pool needs at least two tokens");
    if (decimals.size() != tokens.size()) {
        throw std::invalid_argument("decimals list does not match token list");
    }
    if (protocol != Protocol::BalancerV2 && tokens.size() != 2) {
        throw std::invalid_argument("pair pool must have exactly two tokens");
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
        for (size_t j = i + 1; j < tokens.size(); ++j) {
            if (tokens[i] == tokens[j]) {
                throw std::invalid_argument("duplicate token in pool");
            }
        }
    }
}

const SwapTopics& swap_topics() {
    static const SwapTopics topics = [] {
        SwapTopics t;
        t.uni_v2 = keccak256(kUniV2SwapSig);
        t.uni_v3 = keccak256(kUniV3SwapSig);
        t.algebra = keccak256(kAlgebraSwapSig);
        t.balancer_v2 = keccak256(kBalancerV2SwapSig);
        return t;
    }();
    return topics;
}

std::optional<Protocol> classify_log(const RawLog& log) {
    if (log.topics.empty()) return std::nullopt;
    const SwapTopics& t = swap_topics();
    const Hash32& topic0 = log.topics[0];
    if (topic0 == t.uni_v2) return Protocol::UniV2;
    if (topic0 == t.uni_v3) return Protocol::UniV3;
    if (topic0 == t.algebra) return Protocol::Algebra;
    if (topic0 == t.balancer_v2) return Protocol::BalancerV2;
    return std::nullopt;
}

SwapEvent decode_v2_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash) {
    require_protocol(meta, Protocol::UniV2);
    meta.validate();
    require_shape(log, 3, 4);

    const BigInt amount0_in = abi::read_uint(log.data, 0);
    const BigInt amount1_in = abi::read_uint(log.data, 1);
    const BigInt amount0_out = abi::read_uint(log.data, 2);
    const BigInt amount1_out = abi::read_uint(log.data, 3);

    if (amount0_in > 0 && amount1_in > 0) ambiguous("input on both sides");
    if (amount0_out > 0 && amount1_out > 0) ambiguous("output on both sides");
    if (amount0_in == 0 && amount1_in == 0) malformed("no input amount");
    if (amount0_out == 0 && amount1_out == 0) malformed("no output amount");

    const bool token0_in = amount0_in > 0;
    const bool token0_out = amount0_out > 0;
    if (token0_in == token0_out) ambiguous("input and output on the same side");

    SwapEvent ev;
    ev.pool = log.emitter;
    ev.protocol = Protocol::UniV2;
    ev.tx_hash = tx_hash;
    ev.log_index = log.log_index;
    ev.recipient = address_from_topic(log.topics[2]);
    if (token0_in) {
        ev.token_in = meta.token0();
        ev.token_out = meta.token1();
        ev.amount_in = TokenAmount{amount0_in, meta.decimals[0]};
        ev.amount_out = TokenAmount{amount1_out, meta.decimals[1]};
    } else {
        ev.token_in = meta.token1();
        ev.token_out = meta.token0();
        ev.amount_in = TokenAmount{amount1_in, meta.decimals[1]};
        ev.amount_out = TokenAmount{amount0_out, meta.decimals[0]};
    }
    return ev;
}

SwapEvent decode_v3_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash) {
    return decode_signed_pair(log, meta, tx_hash, Protocol::UniV3, 5);
}

SwapEvent decode_algebra_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash) {
    return decode_signed_pair(log, meta, tx_hash, Protocol::Algebra, 6);
}

SwapEvent decode_balancer_swap(
    const RawLog& log, const Hash32& tx_hash,
    const std::function<std::optional<uint32_t>(const Address&)>& decimals_lookup) {
    require_shape(log, 4, 2);

    SwapEvent ev;
    ev.protocol = Protocol::BalancerV2;
    ev.tx_hash = tx_hash;
    ev.log_index = log.log_index;
    // poolId packs the pool address into its first 20 bytes.
    std::copy_n(log.topics[1].bytes.begin(), 20, ev.pool.bytes.begin());
    ev.token_in = address_from_topic(log.topics[2]);
    ev.token_out = address_from_topic(log.topics[3]);
    if (ev.token_in == ev.token_out) malformed("tokenIn equals tokenOut");

    const BigInt amount_in = abi::read_uint(log.data, 0);
    const BigInt amount_out = abi::read_uint(log.data, 1);
    if (amount_in == 0 && amount_out == 0) malformed("both amounts zero");

    const auto decimals_of = [&](const Address& token) -> uint32_t {
        if (decimals_lookup) {
            if (auto d = decimals_lookup(token)) return *d;
        }
        return 0;
    };
    ev.amount_in = TokenAmount{amount_in, decimals_of(ev.token_in)};
    ev.amount_out = TokenAmount{amount_out, decimals_of(ev.token_out)};
    return ev;
}

PoolRegistry::PoolRegistry(const PoolRegistry& other) {
    std::shared_lock lock(other.mu_);
    pools_ = other.pools_;
}

PoolRegistry PoolRegistry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool registry: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    PoolRegistry reg;
    for (const auto& entry : j.at("pools")) {
        PoolMeta meta;
        meta.pool = Address::from_hex(entry.at("pool").get<std::string>());
        meta.protocol = protocol_from_string(entry.at("protocol").get<std::string>());
        for (const auto& t : entry.at("tokens")) {
            meta.tokens.push_back(Address::from_hex(t.get<std::string>()));
        }
        for (const auto& d : entry.at("decimals")) {
            meta.decimals.push_back(d.get<uint32_t>());
        }
        meta.validate();
        reg.pools_[meta.pool] = std::move(meta);
    }
    return reg;
}

void PoolRegistry::save_file(const std::string& path) const {
    nlohmann::json pools = nlohmann::json::array();
    {
        std::shared_lock lock(mu_);
        for (const auto& [addr, meta] : pools_) {
            nlohmann::json tokens = nlohmann::json::array();
            for (const auto& t : meta.tokens) tokens.push_back(t.to_hex());
            pools.push_back({
                {"pool", addr.to_hex()},
                {"protocol", protocol_to_string(meta.protocol)},
                {"tokens", std::move(tokens)},
                {"decimals", meta.decimals},
            });
        }
    }
    nlohmann::json j{{"pools", std::move(pools)}};

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write pool registry: " + tmp);
        out << j.dump(2) << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot replace pool registry: " + path);
    }
}

void PoolRegistry::put(PoolMeta meta) {
    meta.validate();
    std::unique_lock lock(mu_);
    pools_[meta.pool] = std::move(meta);
}

std::optional<PoolMeta> PoolRegistry::lookup(const Address& pool) const {
    std::shared_lock lock(mu_);
    auto it = pools_.find(pool);
    if (it == pools_.end()) return std::nullopt;
    return it->second;
}

std::map<Address, PoolMeta> PoolRegistry::snapshot() const {
    std::shared_lock lock(mu_);
    return pools_;
}

size_t PoolRegistry::size() const {
    std::shared_lock lock(mu_);
    return pools_.size();
}

PoolMeta PoolRegistry::resolve(const Address& pool, Protocol hint, const Resolver& resolver) {
    {
        std::shared_lock lock(mu_);
        auto it = pools_.find(pool);
        if (it != pools_.end()) return it->second;
    }
    if (!resolver) throw UnknownPoolError(pool);

    std::unique_lock lock(mu_);
    for (;;) {
        auto it = pools_.find(pool);
        if (it != pools_.end()) return it->second;
        if (!in_flight_.contains(pool)) break;
        in_flight_cv_.wait(lock);
    }

    in_flight_.insert(pool);
    lock.unlock();
    std::optional<PoolMeta> meta;
    std::exception_ptr error;
    try {
        meta = resolver(pool, hint);
        if (meta) meta->validate();
    } catch (...) {
        error = std::current_exception();
    }
    lock.lock();
    in_flight_.erase(pool);
    in_flight_cv_.notify_all();
    if (error) std::rethrow_exception(error);
    if (!meta) throw UnknownPoolError(pool);
    pools_[pool] = *meta;
    return *meta;
}

DecodedTx decode_transaction(const RawTransaction& tx, PoolRegistry& registry,
                             const PoolRegistry::Resolver& resolver) {
    DecodedTx out;
    if (tx.status != TxStatus::Success) return out;

    for (const RawLog& log : tx.logs) {
        const auto protocol = classify_log(log);
        if (!protocol) continue;

        try {
            if (*protocol == Protocol::BalancerV2) {
                const auto decimals_lookup =
                    [&](const Address& token) -> std::optional<uint32_t> {
                    Address pool;
                    std::copy_n(log.topics[1].bytes.begin(), 20, pool.bytes.begin());
                    auto meta = registry.lookup(pool);
                    if (!meta) return std::nullopt;
                    for (size_t i = 0; i < meta->tokens.size(); ++i) {
                        if (meta->tokens[i] == token) return meta->decimals[i];
                    }
                    return std::nullopt;
                };
                out.swaps.push_back(decode_balancer_swap(log, tx.hash, decimals_lookup));
                continue;
            }

            const PoolMeta meta = registry.resolve(log.emitter, *protocol, resolver);
            switch (*protocol) {
                case Protocol::UniV2:
                    out.swaps.push_back(decode_v2_swap(log, meta, tx.hash));
                    break;
                case Protocol::UniV3:
                    out.swaps.push_back(decode_v3_swap(log, meta, tx.hash));
                    break;
                case Protocol::Algebra:
                    out.swaps.push_back(decode_algebra_swap(log, meta, tx.hash));
                    break;
                case Protocol::BalancerV2:
                    break;
            }
        } catch (const SwapDecodeError& e) {
            out.skipped.push_back({log.log_index, e.what()});
        } catch (const UnknownPoolError& e) {
            out.skipped.push_back({log.log_index, e.what()});
        }
    }
    return out;
}

}  // namespace aascan
