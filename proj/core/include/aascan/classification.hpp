#pragma once

#include "aascan/bigint.hpp"
#include "aascan/delta.hpp"
#include "aascan/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace aascan {

enum class Strategy { NotAA, SpamBased, FastLaneBased };

std::string strategy_to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

/// Per-transaction verdict. Invariants: profit == gross_value - tau - beta
/// exactly, and is_aa <=> strategy != NotAA.
struct Classification {
    Hash32 tx_hash;
    uint64_t block_number = 0;
    uint32_t tx_index = 0;
    int64_t timestamp = 0;
    bool is_aa = false;
    Strategy strategy = Strategy::NotAA;
    uint32_t swap_count = 0;  // decoded swap legs
    DeltaVector delta;
    Rational gross_value;  // sum over tokens of net delta times price, in common currency
    Rational tau;          // transaction fees, common currency
    Rational beta;         // prioritization bids, common currency
    Rational profit;       // gross_value - tau - beta
    Address searcher;
    std::optional<std::string> diagnostic;

    bool operator==(const Classification&) const = default;
};

// JSON-lines codec used by `scan` output / `report` input. One object per
// line, deterministic key order, exact values (raw integers and rationals as
// strings).
std::string classification_to_json_line(const Classification& c);
Classification classification_from_json_line(std::string_view line);

/// Per-bucket aggregate metrics. Optional fields are undefined for empty
/// buckets (shares) or when the denominator is zero (bid_to_mev_ratio), and
/// the USD volumes are absent when no rate series was supplied.
struct AggregateRow {
    uint64_t bucket_index = 0;
    int64_t bucket_start = 0;  // unix seconds
    uint64_t aa_tx_count_spam = 0;
    uint64_t aa_tx_count_fastlane = 0;
    Rational mev_volume_spam;
    Rational mev_volume_fastlane;
    std::optional<Rational> mev_usd_spam;
    std::optional<Rational> mev_usd_fastlane;
    Rational bids_total;
    uint64_t unique_searchers_spam = 0;
    uint64_t unique_searchers_fastlane = 0;
    std::optional<Rational> fastlane_tx_share;
    std::optional<Rational> fastlane_mev_share;
    std::optional<Rational> bid_to_mev_ratio;

    bool operator==(const AggregateRow&) const = default;
};

}  // namespace aascan
