#pragma once

#include "aascan/types.hpp"

#include <condition_variable>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aascan {

enum class Protocol { UniV2, UniV3, Algebra, BalancerV2 };

std::string protocol_to_string(Protocol p);
Protocol protocol_from_string(std::string_view s);

/// What a pool's Swap events mean: protocol family plus the token list the
/// amount slots refer to. Pair pools carry exactly two tokens.
struct PoolMeta {
    Address pool;
    Protocol protocol = Protocol::UniV2;
    std::vector<Address> tokens;
    std::vector<uint32_t> decimals;

    const Address& token0() const { return tokens.at(0); }
    const Address& token1() const { return tokens.at(1); }
    void validate() const;  // throws std::invalid_argument

    bool operator==(const PoolMeta&) const = default;
};

/// One protocol-normalized swap leg, from the transaction agent's side:
/// the agent pays amount_in of token_in into the pool and receives
/// amount_out of token_out. Either amount may be zero, not both.
struct SwapEvent {
    Address pool;
    Protocol protocol = Protocol::UniV2;
    Address token_in;
    Address token_out;
    TokenAmount amount_in;
    TokenAmount amount_out;
    Address recipient;
    uint32_t log_index = 0;
    Hash32 tx_hash;

    bool operator==(const SwapEvent&) const = default;
};

// topic0 values of the canonical Swap signatures, keccak-hashed from the
// signature strings at first use (never transcribed by hand).
struct SwapTopics {
    Hash32 uni_v2;
    Hash32 uni_v3;
    Hash32 algebra;
    Hash32 balancer_v2;
};
const SwapTopics& swap_topics();

/// Protocol tag for a log's topic0, or nullopt for anything that is not a
/// canonical Swap event (including anonymous logs).
std::optional<Protocol> classify_log(const RawLog& log);

class SwapDecodeError : public std::runtime_error {
public:
    enum class Kind { Malformed, AmbiguousSwap, ProtocolMismatch };
    SwapDecodeError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class UnknownPoolError : public std::runtime_error {
public:
    explicit UnknownPoolError(const Address& pool)
        : std::runtime_error("unknown pool " + pool.to_hex()), pool_(pool) {}
    const Address& pool() const { return pool_; }

private:
    Address pool_;
};

// Per-protocol decoders. Amounts are copied from the log exactly, never
// derived. Throw SwapDecodeError on malformed or ambiguous legs.
//
// V2 data words: (amount0In, amount1In, amount0Out, amount1Out); the token
// with the positive In amount enters the pool, the positive Out amount
// leaves it.
SwapEvent decode_v2_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash = {});
// V3/Algebra data starts with signed (amount0, amount1): positive means the
// token flowed into the pool (the agent paid it), negative means it flowed
// out. Algebra shares the convention with an extra trailing fee word and its
// own topic.
SwapEvent decode_v3_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash = {});
SwapEvent decode_algebra_swap(const RawLog& log, const PoolMeta& meta, const Hash32& tx_hash = {});
// Balancer vault events carry tokenIn/tokenOut directly; the pool is the
// 20-byte prefix of the indexed poolId. `decimals_lookup` is optional
// cosmetics for the amounts.
SwapEvent decode_balancer_swap(const RawLog& log, const Hash32& tx_hash = {},
                               const std::function<std::optional<uint32_t>(const Address&)>&
                                   decimals_lookup = {});

/// Read-mostly pool metadata cache with optional on-miss resolution
/// (single-flight per pool address). Persists as a JSON file keyed by pool.
class PoolRegistry {
public:
    using Resolver =
        std::function<std::optional<PoolMeta>(const Address& pool, Protocol hint)>;

    PoolRegistry() = default;
    PoolRegistry(const PoolRegistry& other);
    PoolRegistry& operator=(const PoolRegistry&) = delete;

    static PoolRegistry load_file(const std::string& path);
    void save_file(const std::string& path) const;

    void put(PoolMeta meta);
    std::optional<PoolMeta> lookup(const Address& pool) const;
    std::map<Address, PoolMeta> snapshot() const;
    size_t size() const;

    // Cached metadata, or resolver-backed population on miss.
    // Throws UnknownPoolError when the pool cannot be resolved.
    PoolMeta resolve(const Address& pool, Protocol hint, const Resolver& resolver = {});

private:
    mutable std::shared_mutex mu_;
    std::map<Address, PoolMeta> pools_;
    std::set<Address> in_flight_;
    std::condition_variable_any in_flight_cv_;
};

/// Decoded swap legs of one transaction, in log order, plus the candidate
/// legs that had to be skipped. Failed transactions decode to nothing.
struct DecodedTx {
    struct Skipped {
        uint32_t log_index = 0;
        std::string reason;
    };
    std::vector<SwapEvent> swaps;
    std::vector<Skipped> skipped;
};

DecodedTx decode_transaction(const RawTransaction& tx, PoolRegistry& registry,
                             const PoolRegistry::Resolver& resolver = {});

}  // namespace aascan
