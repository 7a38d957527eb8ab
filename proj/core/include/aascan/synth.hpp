#pragma once

#include "aascan/classify.hpp"
#include "aascan/decode.hpp"
#include "aascan/types.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace aascan::synth {

class UnencodableError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inverse of the decode module: a log whose decode yields `s` exactly.
/// Throws UnencodableError when `s` violates the protocol's shape (wrong
/// pool tokens, equal in/out tokens, zero amounts where the protocol
/// requires flow).
RawLog encode_swap(const SwapEvent& s, const PoolMeta& meta);

/// Auction bid event as emitted by a configured auction address.
RawLog encode_bid_paid(const Address& auction, const Address& searcher, const BigInt& wei,
                       uint32_t log_index);

/// ERC-20 Transfer log: swap-adjacent noise the decoder must ignore.
RawLog encode_transfer(const Address& token, const Address& from, const Address& to,
                       const BigInt& amount, uint32_t log_index);

/// Deterministic generation recipe. Identical plans produce byte-identical
/// fixtures.
struct SynthPlan {
    uint64_t seed = 1;
    uint64_t block_count = 50;
    uint32_t min_tx_per_block = 1;
    uint32_t max_tx_per_block = 6;
    double planted_aa_fraction = 0.25;  // of transactions
    double fastlane_fraction = 0.3;     // of planted arbitrage, auction-routed
    double near_miss_fraction = 0.3;    // of remaining txs, split across the 3 classes
    uint32_t token_count = 6;
    uint32_t unpriced_token_count = 1;  // trailing tokens left out of the price table
    uint32_t searcher_count = 12;
    uint64_t start_block = 1000;
    int64_t start_timestamp = 1700000000;
    int64_t block_interval_seconds = 2;
    uint32_t max_amount_pow10 = 24;  // leg magnitudes span 10^0 .. 10^this

    void validate() const;  // throws std::invalid_argument

    static SynthPlan load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

struct TruthEntry {
    bool is_aa = false;
    Strategy strategy = Strategy::NotAA;
    Rational profit;
    uint32_t swap_count = 0;  // decodable legs
    std::string kind;         // construction label, e.g. "aa_cycle", "near_miss_c1"

    bool operator==(const TruthEntry&) const = default;
};

struct GroundTruth {
    std::map<Hash32, TruthEntry> entries;

    static GroundTruth load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

/// Everything a pipeline run over the generated fixture needs, mutually
/// consistent: blocks, per-transaction truth, the pool registry behind the
/// fixture's pools, and a classifier config carrying the plan's price table
/// and auction addresses.
struct SynthOutput {
    std::vector<RawBlock> blocks;
    GroundTruth truth;
    PoolRegistry pools;
    ClassifierConfig classifier;
};

SynthOutput generate(const SynthPlan& plan);

/// Environment for the brute-force reference classifier: plain tables, no
/// registry or config machinery.
struct OracleEnv {
    std::map<Address, std::pair<Address, Address>> pair_tokens;  // pool -> (token0, token1)
    std::map<Address, Rational> prices;  // per whole token, common currency
    std::map<Address, uint32_t> decimals;
    std::map<Address, BigInt> dust;  // raw units, absent = 0
    std::set<Address> fastlane;
    uint32_t native_decimals = 18;
    Rational native_price = Rational(1);
};

OracleEnv oracle_env_from(const PoolRegistry& pools, const ClassifierConfig& cfg);

struct OracleLabel {
    bool is_aa = false;
    Strategy strategy = Strategy::NotAA;
};

/// Deliberately naive re-implementation of the arbitrage criterion used to
/// cross-check the real classifier: re-derives event topics, slices log
/// bytes by hand, tallies token flows into a flat table, and applies the
/// three conditions with plain loops. Shares no decode/classify code.
OracleLabel oracle_classify(const RawTransaction& tx, const OracleEnv& env);

}  // namespace aascan::synth
